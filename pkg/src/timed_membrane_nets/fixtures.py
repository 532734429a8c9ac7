"""Worked example models shipped as DSL text."""

from __future__ import annotations

from dataclasses import dataclass

from .exception import TimedNetsError


@dataclass(frozen=True)
class Example:
    """A named example model."""

    name: str
    description: str
    text: str


TIMED_PSYSTEM = """\
# Two membranes; r2 needs two ticks before its objects arrive.
psystem {
  alphabet a b;
  membrane 1 {
    contents a b;
    rule r1: b -> (b, in 2) @0;
    membrane 2 {
      contents a^2 b;
      rule r2: a -> (a, out) @2;
    }
  }
}
"""

TIMED_NET = """\
# The Petri net of the two-membrane system; tr_r2_2 delays by two ticks.
petri {
  place a_1 a_2 b_1 b_2;
  transition tr_r1_1 @0 loc=1;
  transition tr_r2_2 @2 loc=2;
  b_1 -1-> tr_r1_1;
  tr_r1_1 -1-> b_2;
  a_2 -1-> tr_r2_2;
  tr_r2_2 -1-> a_1;
  marking a_1=1 a_2=2 b_1=1 b_2=1;
}
"""

BRANCHING_PSYSTEM = """\
# a^3 can be rewritten as {r:3} or {r:1, rp:1}.
psystem {
  alphabet a b;
  membrane 1 {
    contents a^3;
    rule r: a -> (b, here) @0;
    rule rp: a^2 -> (b, here) @1;
  }
}
"""

BRANCHING_NET = """\
# p feeds tr_a (weight 1) and tr_b (weight 2).
petri {
  place p q;
  transition tr_a @0 loc=1;
  transition tr_b @1 loc=1;
  p -1-> tr_a;
  p -2-> tr_b;
  tr_a -1-> q;
  tr_b -1-> q;
  marking p=3;
}
"""

EXAMPLES: dict[str, Example] = {
    example.name: example
    for example in (
        Example(
            "timed-psystem",
            "Two-membrane timed system with a delayed rule",
            TIMED_PSYSTEM,
        ),
        Example(
            "timed-net",
            "Timed Petri net with localities for the two-membrane system",
            TIMED_NET,
        ),
        Example(
            "branching-psystem",
            "Single membrane with two maximal steps",
            BRANCHING_PSYSTEM,
        ),
        Example(
            "branching-net",
            "Petri net with two max-enabled steps",
            BRANCHING_NET,
        ),
    )
}


def get_example(name: str) -> Example:
    """Return the example called ``name``."""
    example = EXAMPLES.get(name)
    if example is None:
        raise TimedNetsError(
            f"Unknown example '{name}'; choose from {', '.join(EXAMPLES)}"
        )
    return example
