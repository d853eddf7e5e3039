"""Tiny free-algebra check of the 2x2 supercharge identities.

Entries are non-commutative polynomials in the letters ``F``, ``Fs``
(complex conjugate of F) and their inverses ``Fi``, ``Fsi``, stored as
``{word: int}``.  Words are reduced with ``F Fi = Fi F = 1`` (same for Fs).
"""

from __future__ import annotations

from collections import defaultdict

INVERSES = {"F": "Fi", "Fi": "F", "Fs": "Fsi", "Fsi": "Fs"}


def _reduce(word: tuple) -> tuple:
    out: list[str] = []
    for letter in word:
        if out and INVERSES.get(out[-1]) == letter:
            out.pop()
        else:
            out.append(letter)
    return tuple(out)


def nc(*terms) -> dict:
    """Build an element from ``(coeff, word)`` pairs; ``word`` is a tuple of letters."""
    acc: dict = defaultdict(int)
    for c, w in terms:
        acc[_reduce(tuple(w))] += c
    return {w: c for w, c in acc.items() if c}


ZERO: dict = {}
ONE = nc((1, ()))


def letter(name: str) -> dict:
    return nc((1, (name,)))


def nc_add(a: dict, b: dict, sign: int = 1) -> dict:
    acc = defaultdict(int, a)
    for w, c in b.items():
        acc[w] += sign * c
    return {w: c for w, c in acc.items() if c}


def nc_mul(a: dict, b: dict) -> dict:
    return nc(*((ca * cb, wa + wb) for wa, ca in a.items() for wb, cb in b.items()))


def block(m00=ZERO, m01=ZERO, m10=ZERO, m11=ZERO):
    return ((m00, m01), (m10, m11))


def bmul(a, b):
    return tuple(
        tuple(
            nc_add(nc_mul(a[i][0], b[0][j]), nc_mul(a[i][1], b[1][j]))
            for j in range(2)
        )
        for i in range(2)
    )


def badd(a, b, sign: int = 1):
    return tuple(tuple(nc_add(a[i][j], b[i][j], sign) for j in range(2)) for i in range(2))


def commutator(a, b):
    return badd(bmul(a, b), bmul(b, a), -1)


def anticommutator(a, b):
    return badd(bmul(a, b), bmul(b, a))


def is_zero(a) -> bool:
    return all(not a[i][j] for i in range(2) for j in range(2))


def supercharge_identities() -> dict[str, bool]:
    """Evaluate the block identities of the supercharge construction exactly."""
    F, Fs, Fi, Fsi = (letter(s) for s in ("F", "Fs", "Fi", "Fsi"))
    Q = block(m01=F)
    Qt = block(m10=Fs)
    Qinv = block(m10=Fi)
    Qtinv = block(m01=Fsi)
    super_h = anticommutator(Q, Qt)
    identity = block(ONE, ZERO, ZERO, ONE)
    expected_h = block(nc_mul(F, Fs), ZERO, ZERO, nc_mul(Fs, F))
    return {
        "Q_squared_zero": is_zero(bmul(Q, Q)),
        "Qtilde_squared_zero": is_zero(bmul(Qt, Qt)),
        "super_hamiltonian_diagonal": is_zero(badd(super_h, expected_h, -1)),
        "Q_commutes": is_zero(commutator(Q, super_h)),
        "Qtilde_commutes": is_zero(commutator(Qt, super_h)),
        "Qinv_commutes": is_zero(commutator(Qinv, super_h)),
        "Qtilde_inv_commutes": is_zero(commutator(Qtinv, super_h)),
        "Q_Qinv_anticommutator_identity": is_zero(badd(anticommutator(Q, Qinv), identity, -1)),
        "Qtilde_anticommutator_identity": is_zero(
            badd(anticommutator(Qt, Qtinv), identity, -1)
        ),
    }
