"""Tests for interned symbols, multisets and occurrence multisets."""

import pytest
from hypothesis import given
from hypothesis import strategies as st

from timed_membrane_nets.const import MAX_COUNT
from timed_membrane_nets.exception import (
    CountOverflowError,
    ModelValidationError,
    UnderflowError,
)
from timed_membrane_nets.multiset import Alphabet, Multiset, Occurrences


SYMBOLS = Alphabet(["a", "b", "c"])
multisets = st.dictionaries(
    st.sampled_from(list(SYMBOLS)), st.integers(0, 10_000)
).map(Multiset)
factors = st.integers(0, 1_000)

@pytest.fixture()
def alphabet():
    """Three-symbol alphabet."""
    return Alphabet(["a", "b", "c"])


class TestInternTable:
    """Test name interning."""

    def test_ids_follow_declaration_order(self, alphabet):
        """Test ids are dense positions in the table."""
        assert [symbol.id for symbol in alphabet] == [0, 1, 2]
        assert alphabet["b"].name == "b"
        assert alphabet.by_id(2) == alphabet["c"]

    def test_unknown_name_is_a_validation_error(self, alphabet):
        """Test looking up an undeclared name."""
        with pytest.raises(ModelValidationError, match="'z'"):
            alphabet["z"]
        assert alphabet.get("z") is None

    def test_duplicate_names_rejected(self):
        """Test a table cannot intern the same name twice."""
        with pytest.raises(ModelValidationError):
            Alphabet(["a", "a"])

    def test_extended_keeps_existing_handles(self, alphabet):
        """Test extension appends ids without renumbering."""
        wider = alphabet.extended(["a_0", "a_1"])
        assert wider["a"] == alphabet["a"]
        assert wider["a_1"].id == 4
        assert len(wider) == 5

    def test_equality_by_names(self, alphabet):
        """Test two tables with the same names are equal."""
        assert alphabet == Alphabet(["a", "b", "c"])
        assert alphabet != Alphabet(["a", "c", "b"])

    @pytest.mark.parametrize("name", ["eps", "x y", "1a", "", "a-b", "_a"])
    def test_names_must_print_back(self, name):
        """Test only identifier-shaped names other than eps are interned."""
        with pytest.raises(ModelValidationError):
            Alphabet(["a", name])
        with pytest.raises(ModelValidationError):
            Alphabet(["a"]).extended([name])

    def test_owns_by_identity(self, alphabet):
        """Test a table owns its handles but not equal ones from elsewhere."""
        other = Alphabet(["a", "b", "c"])
        assert alphabet.owns(alphabet["a"])
        assert alphabet.extended(["d"]).owns(alphabet["a"])
        assert other["a"] == alphabet["a"]
        assert not other.owns(alphabet["a"])
        assert not alphabet.owns(None)


class TestMultiset:
    """Test multiset arithmetic."""

    def test_counts_and_size(self, alphabet):
        """Test construction sums repeated keys and drops zeros."""
        a, b = alphabet["a"], alphabet["b"]
        objects = Multiset([(a, 1), (b, 0), (a, 2)])
        assert objects.count(a) == 3
        assert objects.count(b) == 0
        assert objects.size == 3
        assert objects.support() == [a]

    def test_add_and_sub(self, alphabet):
        """Test count-wise sum and difference."""
        a, b = alphabet["a"], alphabet["b"]
        left = Multiset.of(a, a, b)
        right = Multiset.of(a)
        assert left + right == Multiset({a: 3, b: 1})
        assert left - right == Multiset.of(a, b)

    def test_sub_underflow(self, alphabet):
        """Test removing more than present raises."""
        a, b = alphabet["a"], alphabet["b"]
        with pytest.raises(UnderflowError):
            Multiset.of(a) - Multiset.of(b)

    def test_negative_count_rejected(self, alphabet):
        """Test negative multiplicities are not representable."""
        with pytest.raises(UnderflowError):
            Multiset({alphabet["a"]: -1})

    def test_overflow_rejected(self, alphabet):
        """Test multiplicities above the bound raise."""
        a = alphabet["a"]
        big = Multiset({a: MAX_COUNT})
        with pytest.raises(CountOverflowError):
            big + Multiset.of(a)

    def test_containment_and_fits(self, alphabet):
        """Test leq and how many copies of a demand fit."""
        a, b = alphabet["a"], alphabet["b"]
        pool = Multiset({a: 5, b: 2})
        assert Multiset({a: 2}).leq(pool)
        assert not Multiset({b: 3}).leq(pool)
        assert pool.fits(Multiset({a: 2})) == 2
        assert pool.fits(Multiset({a: 1, b: 1})) == 2
        assert pool.fits(Multiset.of(alphabet["c"])) == 0

    def test_scale(self, alphabet):
        """Test scalar multiplication."""
        a = alphabet["a"]
        assert Multiset.of(a).scale(3) == Multiset({a: 3})
        assert not Multiset.of(a).scale(0)
        assert 2 * Multiset.of(a) == Multiset({a: 2})

    def test_rendering(self, alphabet):
        """Test the ``a^2 b`` rendering and the empty multiset."""
        a, b = alphabet["a"], alphabet["b"]
        assert str(Multiset({b: 1, a: 2})) == "a^2 b"
        assert str(Multiset()) == "eps"

    def test_equal_multisets_hash_equal(self, alphabet):
        """Test hashing agrees with equality."""
        a, b = alphabet["a"], alphabet["b"]
        assert hash(Multiset([(a, 1), (b, 1)])) == hash(Multiset.of(b, a))


class TestMultisetLaws:
    """Test the algebra of multisets on generated values."""

    @given(multisets, multisets, multisets)
    def test_commutative_monoid(self, x, y, z):
        """Test sum is associative and commutative with eps as unit."""
        assert x + y == y + x
        assert (x + y) + z == x + (y + z)
        assert x + Multiset() == x
        assert (x + y).size == x.size + y.size

    @given(multisets, multisets)
    def test_cancellation(self, x, y):
        """Test adding then removing the same multiset is the identity."""
        assert (x + y) - y == x
        assert x.leq(x + y)
        assert x - x == Multiset()

    @given(multisets, multisets, multisets)
    def test_containment_is_monotone(self, x, y, z):
        """Test containment survives adding the same multiset to both sides."""
        smaller, larger = x, x + y
        assert smaller <= larger
        assert smaller + z <= larger + z
        assert (larger - smaller) == y

    @given(multisets, multisets, factors, factors)
    def test_scale_distributes(self, x, y, n, m):
        """Test scaling distributes over both sums."""
        assert x.scale(n + m) == x.scale(n) + x.scale(m)
        assert (x + y).scale(n) == x.scale(n) + y.scale(n)
        assert x.scale(n).size == n * x.size

    @given(multisets, st.integers(1, 20))
    def test_fits_is_floor_division(self, x, n):
        """Test a multiset scaled by n holds n copies of itself."""
        if x:
            assert x.scale(n).fits(x) == n

class TestOccurrences:
    """Test occurrence multisets keyed by index."""

    def test_vector_round_trip(self):
        """Test dense vectors and sparse items agree."""
        choice = Occurrences.from_vector([1, 0, 2])
        assert choice.items() == ((0, 1), (2, 2))
        assert choice.vector(3) == (1, 0, 2)
        assert choice.total == 3

    def test_describe(self):
        """Test rendering with names."""
        choice = Occurrences({0: 1, 1: 2})
        assert choice.describe(lambda i: f"r{i + 1}") == "{r1:1, r2:2}"
        assert Occurrences().describe(str) == "{}"
