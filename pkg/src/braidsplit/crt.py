"""Prime-power splitting of a modulus and componentwise CRT recombination."""

from __future__ import annotations

import math
from typing import Sequence

from sympy import factorint

from .linalg import ResidueVector


def crt_split(q: int) -> list[tuple[int, int, int]]:
    """Factor ``q`` into ``(prime, exponent, prime**exponent)`` triples, primes increasing."""
    if not isinstance(q, int) or q < 2:
        raise ValueError(f"crt_split needs q >= 2, got {q!r}")
    return [(p, e, p**e) for p, e in sorted(factorint(q).items())]


def crt_combine(parts: Sequence[ResidueVector]) -> ResidueVector:
    """Combine vectors given modulo pairwise coprime moduli into one vector mod their product."""
    if not parts:
        raise ValueError("nothing to combine")
    length = len(parts[0])
    if any(len(p) != length for p in parts):
        raise ValueError("vectors of different lengths")
    moduli = [p.modulus for p in parts]
    for i, a in enumerate(moduli):
        for b in moduli[i + 1 :]:
            if math.gcd(a, b) != 1:
                raise ValueError(f"moduli {a} and {b} are not coprime")
    total = math.prod(moduli)
    coords = [0] * length
    for part in parts:
        m = part.modulus
        rest = total // m
        # weight is 1 mod m and 0 mod every other factor
        weight = rest * pow(rest, -1, m) if m > 1 else 0
        for i, c in enumerate(part.coords):
            coords[i] += c * weight
    return ResidueVector(tuple(coords), total)
