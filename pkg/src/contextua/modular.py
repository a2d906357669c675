"""Invariants of transitive actions of the modular group <a, b | a^2, b^3>.

alpha (order 2) and beta (order 3) act on the cosets; their fixed points are
the elliptic points, the cycles of alpha*beta are the cusps and their lengths
the cusp widths.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from fractions import Fraction

from .permgrp import cycle_type, cycles, inv, is_identity, mul, orbit, power


class NotModularAction(ValueError):
    pass


@dataclass(frozen=True)
class ModularInvariants:
    index: int
    nu2: int
    nu3: int
    cusp_widths: tuple  # sorted decreasingly
    level: int
    genus: int

    @property
    def cusps(self):
        return len(self.cusp_widths)

    def to_json(self):
        d = asdict(self)
        d["cusp_widths"] = list(self.cusp_widths)
        return d


def _check_transitive(alpha, beta):
    n = len(alpha)
    if len(beta) != n:
        raise NotModularAction("permutations of different degree")
    if len(orbit([alpha, beta], 0)) != n:
        raise NotModularAction("action is not transitive")


def modular_invariants(alpha, beta):
    n = len(alpha)
    _check_transitive(alpha, beta)
    if not is_identity(power(alpha, 2)):
        raise NotModularAction("alpha^2 is not the identity")
    if not is_identity(power(beta, 3)):
        raise NotModularAction("beta^3 is not the identity")
    nu2 = sum(1 for i in range(n) if alpha[i] == i)
    nu3 = sum(1 for i in range(n) if beta[i] == i)
    widths = tuple(sorted(cycle_type(mul(alpha, beta)), reverse=True))
    other = tuple(sorted(cycle_type(mul(beta, alpha)), reverse=True))
    if widths != other:  # conjugate products; cannot happen for permutations
        raise AssertionError("alpha*beta and beta*alpha have different cycle types")
    g = Fraction(1) + Fraction(n, 12) - Fraction(nu2, 4) - Fraction(nu3, 3) - Fraction(len(widths), 2)
    if g.denominator != 1 or g < 0:
        raise AssertionError(f"genus formula gave {g}")
    return ModularInvariants(n, nu2, nu3, widths, math.lcm(*widths), int(g))


def dessin_genus(alpha, beta):
    """Genus of the map: 2 - 2g = c(alpha) + c(beta) + c((alpha beta)^-1) - n."""
    n = len(alpha)
    _check_transitive(alpha, beta)
    count = lambda p: len(cycles(p, singletons=True))
    chi = count(alpha) + count(beta) + count(inv(mul(alpha, beta))) - n
    if chi % 2:
        raise AssertionError("odd Euler characteristic")
    return (2 - chi) // 2
