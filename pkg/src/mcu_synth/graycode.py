"""Binary reflected Gray code sequences and transition positions.

Bit positions are 1-based counting from the most significant bit, matching
the wire numbering of the synthesis modules.
"""

from dataclasses import dataclass

MAX_BETA = 24


@dataclass(frozen=True)
class GraySeq:
    beta: int
    codes: tuple  # 2**beta integers, each in [0, 2**beta)

    def bits(self, alpha):
        """Code number alpha (1-based) as a bit string, MSB first."""
        return format(self.codes[alpha - 1], f"0{self.beta}b")


def gray_sequence(beta):
    """Standard binary reflected Gray code over ``beta`` bits."""
    if not 1 <= beta <= MAX_BETA:
        raise ValueError(f"beta must be in 1..{MAX_BETA}, got {beta}")
    codes = tuple((a ^ (a >> 1)) for a in range(1 << beta))
    return GraySeq(beta=beta, codes=codes)


def gamma(alpha, beta):
    """1-based, MSB-first position of the single bit where code alpha and
    its cyclic successor differ."""
    if not 1 <= beta <= MAX_BETA:
        raise ValueError(f"beta must be in 1..{MAX_BETA}, got {beta}")
    size = 1 << beta
    if not 1 <= alpha <= size:
        raise ValueError(f"alpha must be in 1..{size}, got {alpha}")
    g1 = (alpha - 1) ^ ((alpha - 1) >> 1)
    nxt = alpha % size  # alpha == 2**beta wraps to the first code
    g2 = nxt ^ (nxt >> 1)
    diff = g1 ^ g2
    if diff == 0 or diff & (diff - 1):
        raise AssertionError("Gray codes must differ in exactly one bit")
    return beta - diff.bit_length() + 1


def gamma_sequence(beta):
    """All transition positions for one full cyclic Gray walk."""
    return tuple(gamma(a, beta) for a in range(1, (1 << beta) + 1))
