"""Published example networks with their reported certificates.

Each entry records a network in the text grammar together with the
figures and traces reported for it.  Vectors are integer columns.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .netmodel import ReactionNetwork, parse_network


@dataclass(frozen=True)
class Fixture:
    name: str
    text: str
    cone: tuple[tuple[int, ...], ...] | None = None
    ball: tuple[tuple[int, ...], ...] | None = None
    notes: str = ""
    extra: dict = field(default_factory=dict)

    def network(self) -> ReactionNetwork:
        return parse_network(self.text)


EX1 = Fixture(
    "ex1",
    "A + B <=> C\nA <=> B\n2A <=> C\n",
    extra={
        "ball_chain": ((-2, 0, 1), (0, 2, -1), (-2, 2, 0), (-4, 0, 2)),
        "cone_start": (-1, 3, -1),
        "absorbed": (1, 1, -1),
        "absorbing_rays": ((4, 0, -2), (0, 4, -2)),
    },
)

EX2 = Fixture(
    "ex2",
    "species: A B C D\nA <=> B + D\nB <=> C\nC <=> D\nC <=> 0\n",
    cone=((0, 2, 0, 0), (0, 0, 2, 0), (0, 0, 0, 2), (1, 0, 0, 0),
          (2, -2, 0, 0), (2, 0, -2, 0), (2, 0, 0, -2)),
    notes="the printed cone is not closed: [2,0,-2,0] under A <=> B + D gives [0,2,-2,2]",
    extra={"ball_end": (0, 0, 2, 0), "cone_start": (1, 0, 0, 0)},
)

EX3 = Fixture(
    "ex3",
    "A + B <=> 2C\nA <=> C\nB <=> C\n",
    cone=((0, 1, -1), (-1, 0, 1)),
    extra={"cone_start": (-2, 1, 1)},
)

DUALITY = Fixture(
    "duality",
    "A <=> B\n0 <=> A + B\nC <=> B\nC <=> A\n",
    ball=((-1, 0, 0), (1, 0, 0), (0, 1, 0), (0, -1, 0), (0, 0, -1), (0, 0, 1)),
    extra={
        "transferred": ((0, -2, 0, 0), (-2, 0, 0, 2), (2, 0, 2, 0), (0, 2, 2, 2),
                        (0, -2, -2, -2), (-2, 0, -2, 0), (2, 0, 0, -2), (0, 2, 0, 0)),
    },
)

ADD1 = Fixture(
    "add1",
    "13A <=> 11B + 7C\n9B => 7A\n2A => B + 2C\n",
    cone=((-3, 0, 5), (0, 11, 7), (1, 0, 0), (4, -5, 0)),
    extra={
        "dual_cone": ((0, 0, 1), (0, -7, 11), (55, -21, 33), (5, 4, 3)),
        "transferred": ((7, -7, 0, 2), (0, 0, 63, 15), (-715, 715, 574, -65), (0, 0, -1, 0)),
        "dual_alternative": ((-539, 539, 0, -157), (0, 0, 1, 0), (0, 0, -49, -12),
                             (11, -11, 0, 1), (6, -6, -7, 0)),
    },
)

ADD2 = Fixture(
    "add2",
    "A => B + C\nB => A + D\nC => A + D\nB + C + 2D => A\n",
    cone=((-2, 1, 1, 0), (-1, 0, 0, -2), (-1, 0, 1, 1), (-1, 1, 0, 1),
          (0, -1, 0, -1), (0, 0, -1, -1), (0, 0, 0, 2), (1, -1, -1, 0)),
)

ADD3 = Fixture(
    "add3",
    "A + B <=> C\nA => C\nB => C\nB <=> A\nA <=> 0\nB <=> 0\n",
    cone=((-1, 0, 0), (0, -1, 0), (0, 1, -1), (1, 0, -1)),
)

ADD4 = Fixture(
    "add4",
    "A + B <=> C\n2A => C\n2A => B\nC <=> 2B\n2B => 2A + C\n2B => A + C\nA <=> 0\n2B <=> C\nB => C\n",
    cone=((-1, 0, 0), (0, -2, 1), (0, 1, -1), (2, 0, -1)),
)

SPLIT = Fixture("split", "A <=> B\nC <=> D\n")

# smallest discordant two-reaction, two-species network with coefficients
# in -2..2 (by total coefficient size, then fewest reversible reactions):
# no rate depends on B, so e_B is a kinetic null direction inside Im
DISCORDANT = Fixture("discordant", "A => 0\n0 => B\n", extra={"witness": (0, 1)})

ALL = (EX1, EX2, EX3, DUALITY, ADD1, ADD2, ADD3, ADD4, SPLIT, DISCORDANT)
BY_NAME = {f.name: f for f in ALL}
