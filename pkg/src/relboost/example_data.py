"""Built-in smokes-friends-cancer databases.

``train`` is the canonical toy fixture; ``test`` has the same shape over a
disjoint set of people.
"""

from .bias import Background
from .database import Database
from .parsing import parse_ground_atom, parse_mode

MODES = (
    "friends(+person,-person).",
    "friends(-person,+person).",
    "cancer(+person).",
    "smokes(+person).",
)

TRAIN_FACTS = (
    "friends(alice,bob).",
    "friends(bob,alice).",
    "friends(chuck,fred).",
    "friends(fred,chuck).",
    "smokes(alice).",
    "smokes(bob).",
)
TRAIN_POS = ("cancer(alice).", "cancer(bob).")
TRAIN_NEG = ("cancer(chuck).", "cancer(fred).")

TEST_FACTS = (
    "friends(dan,eve).",
    "friends(eve,dan).",
    "friends(gus,hal).",
    "friends(hal,gus).",
    "smokes(dan).",
    "smokes(eve).",
)
TEST_POS = ("cancer(dan).", "cancer(eve).")
TEST_NEG = ("cancer(gus).", "cancer(hal).")

TARGET = "cancer"


def modes():
    return [parse_mode(m) for m in MODES]


def background(**kwargs) -> Background:
    return Background(modes=tuple(modes()), **kwargs)


def _atoms(lines):
    return [parse_ground_atom(s) for s in lines]


def _db(pos, neg, facts) -> Database:
    return Database(_atoms(pos), _atoms(neg), _atoms(facts), modes())


def files():
    """The training fixture as file texts: (pos, neg, facts, modes)."""
    return tuple("".join(f"{line}\n" for line in lines) for lines in (TRAIN_POS, TRAIN_NEG, TRAIN_FACTS, MODES))


train = _db(TRAIN_POS, TRAIN_NEG, TRAIN_FACTS)
test = _db(TEST_POS, TEST_NEG, TEST_FACTS)
