"""Distinguished +infinity for constants whose defining infimum is vacuous.

Kept out of float arithmetic on purpose: INFINITE supports ordering against
reals (so min/max and sorting work) but no arithmetic, which turns silent
misuse into a TypeError.
"""


class Infinite:
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "infinite"

    def __lt__(self, other):
        return False

    def __le__(self, other):
        return other is self

    def __gt__(self, other):
        return other is not self

    def __ge__(self, other):
        return True

    def __eq__(self, other):
        return other is self

    def __hash__(self):
        return hash("infinite")


INFINITE = Infinite()


def is_infinite(x):
    return x is INFINITE
