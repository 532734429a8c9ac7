"""Tests for the model text formats: tokenizer, parsers, printers, loader."""

import json
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from timed_membrane_nets.const import MAX_COUNT, MAX_NESTING
from timed_membrane_nets.dsl import (
    TokenKind,
    dump_model,
    load_file,
    load_model,
    parse_model,
    parse_petri,
    parse_psystem,
    print_model,
    tokenize,
)
from timed_membrane_nets.exception import (
    ModelValidationError,
    ParseError,
    TimedNetsError,
)
from timed_membrane_nets.fixtures import EXAMPLES, TIMED_PSYSTEM
from timed_membrane_nets.petri import TimedPetriNet
from timed_membrane_nets.psystem import TimedPSystem
from timed_membrane_nets.verify import random_petri, random_psystem


class TestTokenizer:
    """Test token spans and lexical errors."""

    def test_spans_are_line_and_column(self):
        """Test tokens carry 1-based positions and offsets."""
        tokens = tokenize("petri {\n  place p;\n}")
        place = tokens[2]
        assert place.text == "place"
        assert (place.span.line, place.span.column) == (2, 3)
        assert (place.span.start, place.span.end) == (10, 15)
        assert tokens[-1].kind is TokenKind.EOF

    def test_arc_weight_tokens(self):
        """Test ``-2->`` splits into minus, integer and arrow."""
        kinds = [token.kind for token in tokenize("p -2-> t")]
        assert kinds == [
            TokenKind.IDENT,
            TokenKind.MINUS,
            TokenKind.INT,
            TokenKind.ARROW,
            TokenKind.IDENT,
            TokenKind.EOF,
        ]

    def test_comments_skipped(self):
        """Test comments run to the end of the line."""
        tokens = tokenize("# heading\nplace # trailing\n")
        assert [token.text for token in tokens[:-1]] == ["place"]

    def test_unknown_character(self):
        """Test a stray character is located."""
        with pytest.raises(ParseError) as caught:
            tokenize("place $")
        assert caught.value.span.column == 7
        assert str(caught.value).startswith("1:7:")

    def test_long_integer_rejected(self):
        """Test integer literals are bounded."""
        with pytest.raises(ParseError, match="digits"):
            tokenize("a^" + "9" * 40)

    def test_invalid_utf8(self):
        """Test undecodable bytes are a parse error."""
        with pytest.raises(ParseError):
            tokenize(b"petri { \xff }")


class TestParsePSystem:
    """Test the membrane system format."""

    def test_example(self, timed_psystem):
        """Test the two-membrane example."""
        assert timed_psystem.structure.labels == [1, 2]
        assert str(timed_psystem.initial[2]) == "a^2 b"
        assert str(timed_psystem.rules[0]) == "r1: b -> (b, in 2) @0"
        assert str(timed_psystem.rules[1]) == "r2: a -> (a, out) @2"

    def test_delay_defaults_to_zero(self):
        """Test rules without ``@`` are instantaneous."""
        system = parse_psystem(
            "psystem { alphabet a; membrane 1 { rule r: a -> eps; } }"
        )
        assert system.rules[0].delay == 0
        assert not system.rules[0].rhs

    def test_unknown_symbol_located(self):
        """Test symbols must be declared in the alphabet."""
        text = "psystem {\n  alphabet a;\n  membrane 1 { contents a z; }\n}"
        with pytest.raises(ModelValidationError) as caught:
            parse_psystem(text)
        assert "'z'" in caught.value.message
        assert (caught.value.span.line, caught.value.span.column) == (3, 27)

    def test_in_target_must_be_child(self):
        """Test ``in`` names a direct child, located at the label."""
        text = (
            "psystem { alphabet a; membrane 1 {\n"
            "  rule r: a -> (a, in 3);\n"
            "  membrane 2 { } } }"
        )
        with pytest.raises(ModelValidationError, match="not a child") as caught:
            parse_psystem(text)
        assert caught.value.span.line == 2

    def test_duplicate_membrane_label(self):
        """Test labels are unique."""
        text = "psystem { alphabet a; membrane 1 { membrane 1 { } } }"
        with pytest.raises(ModelValidationError, match="Duplicate membrane"):
            parse_psystem(text)

    def test_duplicate_rule_name(self):
        """Test rule names are unique across membranes."""
        text = (
            "psystem { alphabet a; membrane 1 { rule r: a -> eps;"
            " membrane 2 { rule r: a -> eps; } } }"
        )
        with pytest.raises(ModelValidationError, match="Duplicate rule"):
            parse_psystem(text)

    def test_reserved_name(self):
        """Test ``eps`` cannot be a symbol."""
        with pytest.raises(ParseError, match="reserved"):
            parse_psystem("psystem { alphabet eps; membrane 1 { } }")

    def test_expected_tokens_reported(self):
        """Test a syntax error lists what would have been accepted."""
        with pytest.raises(ParseError) as caught:
            parse_psystem("psystem { alphabet a; membrane 1 { rule r: a b; } }")
        assert caught.value.expected == ("'->'",)
        assert caught.value.found == "';'"

    def test_nesting_limit(self):
        """Test absurdly deep nesting is refused."""
        depth = MAX_NESTING + 1
        inner = "".join(f"membrane {i} {{ " for i in range(1, depth + 1))
        text = "psystem { alphabet a; " + inner + "}" * depth + " }"
        with pytest.raises(ParseError, match="nested deeper"):
            parse_psystem(text)


class TestParsePetri:
    """Test the Petri net format."""

    def test_example(self, timed_net):
        """Test the documented net."""
        assert timed_net.places.names == ("a_1", "a_2", "b_1", "b_2")
        assert timed_net.transitions.names == ("tr_r1_1", "tr_r2_2")
        assert timed_net.delay == (0, 2)
        assert timed_net.locality == (1, 2)

    def test_weights(self, branching_net):
        """Test explicit arc weights."""
        p = branching_net.place("p")
        tr_b = branching_net.transition("tr_b")
        assert branching_net.weight(p, tr_b) == 2

    def test_place_to_place_arc(self):
        """Test arcs join a place and a transition."""
        text = "petri { place p q; transition t; p -> q; }"
        with pytest.raises(ModelValidationError, match="place and a transition"):
            parse_petri(text)

    def test_undeclared_arc_end(self):
        """Test arcs name declared nodes."""
        text = "petri { place p; transition t;\n  p -> u; }"
        with pytest.raises(ModelValidationError) as caught:
            parse_petri(text)
        assert caught.value.span.line == 2

    def test_duplicate_arc(self):
        """Test the same arc cannot be declared twice."""
        text = "petri { place p; transition t; p -> t; p -2-> t; }"
        with pytest.raises(ModelValidationError, match="Duplicate arc"):
            parse_petri(text)

    def test_duplicate_declaration(self):
        """Test a name is declared once across places and transitions."""
        text = "petri { place p; transition p; }"
        with pytest.raises(ModelValidationError, match="declared twice"):
            parse_petri(text)

    def test_zero_weight_rejected(self):
        """Test arc weights are positive."""
        with pytest.raises(ParseError):
            parse_petri("petri { place p; transition t; p -0-> t; }")


class TestRoundTrip:
    """Test that printing then parsing preserves models."""

    @pytest.mark.parametrize("name", sorted(EXAMPLES))
    def test_examples(self, name):
        """Test every bundled example."""
        model = load_model(EXAMPLES[name].text)
        assert parse_model(print_model(model)) == model

    def test_random_models(self):
        """Test a thousand random models in both formats."""
        for seed in range(500):
            for model in (random_psystem(seed), random_petri(seed)):
                assert load_model(dump_model(model, "dsl")) == model
                assert load_model(dump_model(model, "json")) == model

    def test_printing_is_canonical(self, timed_psystem):
        """Test printing a reparsed model is stable."""
        text = print_model(timed_psystem)
        assert print_model(parse_model(text)) == text


class TestLoader:
    """Test format detection and JSON documents."""

    def test_json_document(self, timed_net):
        """Test a JSON net document loads."""
        document = json.loads(dump_model(timed_net, "json"))
        assert document["kind"] == "petri"
        assert load_model(json.dumps(document)) == timed_net

    def test_unknown_field_rejected(self, timed_net):
        """Test documents reject fields they do not define."""
        document = json.loads(dump_model(timed_net, "json"))
        document["colour"] = "red"
        with pytest.raises(ModelValidationError, match="colour"):
            load_model(json.dumps(document))

    def test_unknown_kind_rejected(self):
        """Test the document kind selects the model type."""
        with pytest.raises(ModelValidationError):
            load_model('{"kind": "automaton"}')

    def test_load_file(self, tmp_path):
        """Test files are read as bytes and dispatched."""
        path = tmp_path / "model.tmn"
        path.write_bytes(TIMED_PSYSTEM.encode("utf-8"))
        assert isinstance(load_file(path), TimedPSystem)

    def test_unknown_keyword(self):
        """Test the first keyword picks the parser."""
        with pytest.raises(ParseError):
            parse_model("automaton { }")

    def test_net_kind(self, timed_net):
        """Test nets parse to nets."""
        assert isinstance(timed_net, TimedPetriNet)

    @pytest.mark.parametrize("names", [["eps", "x y"], ["a", "x y"], ["b", "eps"]])
    def test_json_names_must_print_back(self, timed_psystem, names):
        """Test JSON documents use the same names the DSL accepts."""
        document = json.loads(dump_model(timed_psystem, "json"))
        document["alphabet"] = names
        with pytest.raises(ModelValidationError, match="name|reserved"):
            load_model(json.dumps(document))

    def test_json_rule_name_checked(self, timed_psystem):
        """Test rule names in documents follow the DSL identifier form."""
        document = json.loads(dump_model(timed_psystem, "json"))
        document["rules"][0]["name"] = "r 1"
        with pytest.raises(ModelValidationError, match="rule name"):
            load_model(json.dumps(document))

    def test_json_nesting_limit(self):
        """Test JSON structures obey the same nesting bound as the DSL."""
        depth = MAX_NESTING + 1
        structure = {
            str(label): None if label == 1 else label - 1
            for label in range(1, depth + 1)
        }
        document = {"kind": "psystem", "alphabet": ["a"], "structure": structure}
        with pytest.raises(ModelValidationError, match="nested deeper"):
            load_model(json.dumps(document))
        structure.pop(str(depth))
        model = load_model(json.dumps(document))
        assert load_model(print_model(model)) == model

    def test_json_delay_bounded(self, timed_psystem):
        """Test execution times the DSL could not read back are refused."""
        document = json.loads(dump_model(timed_psystem, "json"))
        document["rules"][0]["delay"] = MAX_COUNT + 1
        with pytest.raises(ModelValidationError, match="execution time"):
            load_model(json.dumps(document))


class TestFuzz:
    """Test that arbitrary input never escapes as an unexpected exception."""

    @settings(max_examples=300, deadline=None)
    @given(st.text(max_size=200))
    def test_arbitrary_text(self, text):
        """Test random text parses or raises a toolkit error."""
        try:
            parse_model(text)
        except TimedNetsError:
            pass

    @settings(max_examples=300, deadline=None)
    @given(
        st.lists(
            st.sampled_from(
                [
                    "psystem", "petri", "alphabet", "membrane", "contents",
                    "rule", "place", "transition", "marking", "loc", "here",
                    "out", "in", "eps", "a", "b", "t", "{", "}", "(", ")",
                    ";", ":", ",", "=", "^", "@", "->", "-", "0", "1", "2",
                ]
            ),
            max_size=60,
        )
    )
    def test_token_soup(self, words):
        """Test sequences of valid tokens parse or raise a toolkit error."""
        try:
            parse_model(" ".join(words))
        except TimedNetsError:
            pass

    @settings(max_examples=300, deadline=None)
    @given(st.binary(max_size=200))
    def test_arbitrary_bytes(self, data):
        """Test random bytes parse or raise a toolkit error."""
        try:
            parse_model(data)
        except TimedNetsError:
            pass

    def test_seeded_byte_strings(self):
        """Test ten thousand seeded byte strings, mostly printable."""
        rng = random.Random(0)
        alphabet = b"psystemrinaloc{}();:,=^@->_ 0123456789\n#\xff"
        for _ in range(10_000):
            size = rng.randrange(80)
            data = bytes(rng.choice(alphabet) for _ in range(size))
            try:
                parse_model(data)
            except TimedNetsError:
                pass
