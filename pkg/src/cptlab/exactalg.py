"""Exact polynomial and ordinary-differential-operator algebra.

Scalars are Gaussian rationals (:class:`CRational`, built on
:class:`fractions.Fraction`).  A :class:`Poly` is a dense coefficient tuple,
lowest power first, with trailing zeros trimmed.  A :class:`DiffOp` is the
finite sum ``sum_k a_k(x) d^k/dx^k`` stored as a sorted tuple of
``(k, a_k)`` pairs with no zero coefficients, so structural equality is
operator equality.

Text format
-----------
Polynomials are written as comma-separated coefficients, lowest power
first, optionally followed by ``+i:`` and the imaginary coefficients::

    poly   := [reals] ["+i:" imags]
    reals  := coeff ("," coeff)*
    coeff  := INT | INT "/" INT | DECIMAL

``"0,0,1"`` is ``x**2``; ``"0,1+i:0,0"`` is ``x`` (imaginary part zero);
``"1+i:0,0,0,2"`` is ``1 + 2i x**3``; ``"+i:1"`` is ``i``.  Decimals are
converted exactly; with ``exact=True`` only dyadic decimals (finite binary
expansions such as ``0.5`` or ``1.375``) are accepted.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Union

Rational = Fraction

Scalar = Union[int, Fraction, "CRational"]


@dataclass(frozen=True)
class CRational:
    """Complex number with exact rational real and imaginary parts."""

    re: Fraction = Fraction(0)
    im: Fraction = Fraction(0)

    def __post_init__(self):
        if not isinstance(self.re, Fraction):
            object.__setattr__(self, "re", Fraction(self.re))
        if not isinstance(self.im, Fraction):
            object.__setattr__(self, "im", Fraction(self.im))

    @classmethod
    def coerce(cls, value: Scalar) -> "CRational":
        if isinstance(value, CRational):
            return value
        if isinstance(value, complex):
            return cls(Fraction(value.real), Fraction(value.imag))
        return cls(Fraction(value))

    def __add__(self, other):
        other = CRational.coerce(other)
        return CRational(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __sub__(self, other):
        other = CRational.coerce(other)
        return CRational(self.re - other.re, self.im - other.im)

    def __rsub__(self, other):
        return CRational.coerce(other) - self

    def __mul__(self, other):
        other = CRational.coerce(other)
        return CRational(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = CRational.coerce(other)
        den = other.re * other.re + other.im * other.im
        if den == 0:
            raise ZeroDivisionError("division by zero CRational")
        num = self * other.conjugate()
        return CRational(num.re / den, num.im / den)

    def __neg__(self):
        return CRational(-self.re, -self.im)

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction, complex, CRational)):
            other = CRational.coerce(other)
            return self.re == other.re and self.im == other.im
        return NotImplemented

    def __hash__(self):
        return hash((self.re, self.im))

    def conjugate(self) -> "CRational":
        return CRational(self.re, -self.im)

    def is_real(self) -> bool:
        return self.im == 0

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __str__(self):
        if self.im == 0:
            return str(self.re)
        if self.re == 0:
            return f"{self.im}i"
        sign = "+" if self.im > 0 else "-"
        return f"({self.re}{sign}{abs(self.im)}i)"

    def __repr__(self):
        return f"CRational({self.re!s}, {self.im!s})"


ZERO = CRational()
ONE = CRational(Fraction(1))
I = CRational(Fraction(0), Fraction(1))


def _trim(coeffs):
    coeffs = list(coeffs)
    while coeffs and not coeffs[-1]:
        coeffs.pop()
    return tuple(coeffs)


class Poly:
    """Univariate polynomial in ``x`` with :class:`CRational` coefficients."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[Scalar] = ()):
        object.__setattr__(
            self, "coeffs", _trim(CRational.coerce(c) for c in coeffs)
        )

    def __setattr__(self, name, value):
        raise AttributeError("Poly is immutable")

    # constructors
    @classmethod
    def constant(cls, c: Scalar) -> "Poly":
        return cls([c])

    @classmethod
    def monomial(cls, c: Scalar, power: int) -> "Poly":
        if power < 0:
            raise ValueError("negative power")
        return cls([0] * power + [c])

    @classmethod
    def x(cls) -> "Poly":
        return cls([0, 1])

    @property
    def degree(self) -> float:
        """``len(coeffs) - 1``, or ``-inf`` for the zero polynomial."""
        return len(self.coeffs) - 1 if self.coeffs else -math.inf

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_real(self) -> bool:
        return all(c.im == 0 for c in self.coeffs)

    def coeff(self, k: int) -> CRational:
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else ZERO

    # ring operations
    def __add__(self, other):
        other = _as_poly(other)
        n = max(len(self.coeffs), len(other.coeffs))
        return Poly(self.coeff(k) + other.coeff(k) for k in range(n))

    __radd__ = __add__

    def __neg__(self):
        return Poly(-c for c in self.coeffs)

    def __sub__(self, other):
        return self + (-_as_poly(other))

    def __rsub__(self, other):
        return _as_poly(other) - self

    def __mul__(self, other):
        other = _as_poly(other)
        if self.is_zero() or other.is_zero():
            return Poly()
        out = [ZERO] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if not a:
                continue
            for j, b in enumerate(other.coeffs):
                if b:
                    out[i + j] = out[i + j] + a * b
        return Poly(out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative exponent")
        result, base = Poly([1]), self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, (int, Fraction, CRational)):
            other = Poly([other])
        if not isinstance(other, Poly):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    # calculus and symmetry
    def derivative(self) -> "Poly":
        return Poly(c * k for k, c in enumerate(self.coeffs) if k > 0)

    def reflect(self) -> "Poly":
        """p(-x)."""
        return Poly(-c if k % 2 else c for k, c in enumerate(self.coeffs))

    def parity_split(self) -> tuple["Poly", "Poly"]:
        even = Poly(c if k % 2 == 0 else ZERO for k, c in enumerate(self.coeffs))
        odd = Poly(c if k % 2 else ZERO for k, c in enumerate(self.coeffs))
        return even, odd

    def conjugate(self) -> "Poly":
        return Poly(c.conjugate() for c in self.coeffs)

    def real_part(self) -> "Poly":
        return Poly(CRational(c.re) for c in self.coeffs)

    def imag_part(self) -> "Poly":
        return Poly(CRational(c.im) for c in self.coeffs)

    def __call__(self, x):
        """Horner evaluation in floating point (``x`` scalar or ndarray)."""
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + complex(c)
        return acc

    def __str__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for k, c in enumerate(self.coeffs):
            if not c:
                continue
            mono = "" if k == 0 else ("x" if k == 1 else f"x^{k}")
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append(f"-{mono}")
            else:
                parts.append(f"{c}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")

    def __repr__(self):
        return f"Poly({self})"


def _as_poly(value) -> Poly:
    return value if isinstance(value, Poly) else Poly([value])


# functional surface ---------------------------------------------------------

def poly_arith(a: Poly, b: Poly, kind: str) -> Poly:
    if kind == "add":
        return a + b
    if kind == "sub":
        return a - b
    if kind == "mul":
        return a * b
    raise ValueError(f"unknown kind {kind!r}")


def poly_derivative(p: Poly) -> Poly:
    return p.derivative()


def poly_parity_split(p: Poly) -> tuple[Poly, Poly]:
    return p.parity_split()


def poly_reflect(p: Poly) -> Poly:
    return p.reflect()


# differential operators -----------------------------------------------------

class DiffOp:
    """Ordinary differential operator ``sum_k a_k(x) (d/dx)^k``."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[int, Poly] | Iterable[tuple[int, Poly]] = ()):
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict[int, Poly] = {}
        for k, p in items:
            if k < 0:
                raise ValueError("derivative order must be non-negative")
            p = _as_poly(p)
            acc[k] = acc[k] + p if k in acc else p
        object.__setattr__(
            self,
            "terms",
            tuple(sorted((k, p) for k, p in acc.items() if not p.is_zero())),
        )

    def __setattr__(self, name, value):
        raise AttributeError("DiffOp is immutable")

    @classmethod
    def multiplication(cls, p: Poly | Scalar) -> "DiffOp":
        return cls({0: _as_poly(p)})

    @classmethod
    def derivative(cls, order: int = 1) -> "DiffOp":
        return cls({order: Poly([1])})

    @classmethod
    def identity(cls) -> "DiffOp":
        return cls.multiplication(1)

    @property
    def order(self) -> int:
        return self.terms[-1][0] if self.terms else -1

    def coefficient(self, k: int) -> Poly:
        for j, p in self.terms:
            if j == k:
                return p
        return Poly()

    def as_dict(self) -> dict[int, Poly]:
        return dict(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other):
        other = _as_op(other)
        return DiffOp(list(self.terms) + list(other.terms))

    __radd__ = __add__

    def __neg__(self):
        return DiffOp((k, -p) for k, p in self.terms)

    def __sub__(self, other):
        return self + (-_as_op(other))

    def __rsub__(self, other):
        return _as_op(other) - self

    def __matmul__(self, other):
        return compose(self, _as_op(other))

    def __mul__(self, other):
        """Scalar or polynomial multiplication from the left of the coefficients."""
        if isinstance(other, DiffOp):
            return compose(self, other)
        p = _as_poly(other)
        return DiffOp((k, a * p) for k, a in self.terms)

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, DiffOp):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(self.terms)

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for k, p in reversed(self.terms):
            d = "" if k == 0 else ("d/dx" if k == 1 else f"d^{k}/dx^{k}")
            if k == 0:
                parts.append(f"({p})")
            elif p == 1:
                parts.append(d)
            else:
                parts.append(f"({p})*{d}")
        return " + ".join(parts)

    def __repr__(self):
        return f"DiffOp({self})"


def _as_op(value) -> DiffOp:
    return value if isinstance(value, DiffOp) else DiffOp.multiplication(value)


def _nth_derivative(p: Poly, n: int) -> Poly:
    for _ in range(n):
        if p.is_zero():
            break
        p = p.derivative()
    return p


def compose(a: DiffOp, b: DiffOp) -> DiffOp:
    """Operator product ``a o b`` via the Leibniz rule.

    ``d^k o (f .) = sum_i C(k, i) f^(i) d^(k-i)``.
    """
    out: list[tuple[int, Poly]] = []
    for k, ak in a.terms:
        for j, bj in b.terms:
            dpoly = bj
            for i in range(k + 1):
                if dpoly.is_zero():
                    break
                out.append((k - i + j, ak * dpoly * math.comb(k, i)))
                dpoly = dpoly.derivative()
    return DiffOp(out)


def adjoint(a: DiffOp) -> DiffOp:
    """Formal adjoint ``sum_k (-1)^k d^k o (conj(a_k) .)``, boundary terms dropped."""
    out: list[tuple[int, Poly]] = []
    for k, ak in a.terms:
        f = ak.conjugate()
        sign = -1 if k % 2 else 1
        for i in range(k + 1):
            fi = _nth_derivative(f, i)
            if fi.is_zero():
                break
            out.append((k - i, fi * (sign * math.comb(k, i))))
    return DiffOp(out)


def parity_conjugate(a: DiffOp) -> DiffOp:
    """``P a P``: x -> -x and d/dx -> -d/dx."""
    return DiffOp(
        (k, -p.reflect() if k % 2 else p.reflect()) for k, p in a.terms
    )


def conjugate(a: DiffOp) -> DiffOp:
    return DiffOp((k, p.conjugate()) for k, p in a.terms)


diffop_compose = compose
diffop_adjoint = adjoint
diffop_parity_conjugate = parity_conjugate
diffop_conjugate = conjugate


def diffop_is_zero(a: DiffOp) -> bool:
    return a.is_zero()


# text format ----------------------------------------------------------------

def parse_rational(text: str, exact: bool = False) -> Fraction:
    """Parse ``"p/q"``, an integer or a decimal into a Fraction.

    With ``exact=True`` a decimal must have a finite binary expansion,
    otherwise ValueError is raised.
    """
    text = text.strip()
    if not text:
        raise ValueError("empty coefficient")
    try:
        value = Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"not a rational number: {text!r}") from exc
    is_decimal = "/" not in text and any(ch in text for ch in ".eE")
    if exact and is_decimal:
        den = value.denominator
        if den & (den - 1):
            raise ValueError(
                f"{text!r} is not exactly representable (non-dyadic decimal); use p/q"
            )
    return value


def parse_poly(text: str, exact: bool = False) -> Poly:
    text = text.replace(" ", "")
    if "+i:" in text:
        real_txt, imag_txt = text.split("+i:", 1)
    else:
        real_txt, imag_txt = text, ""
    re = [parse_rational(t, exact) for t in real_txt.split(",")] if real_txt else []
    im = [parse_rational(t, exact) for t in imag_txt.split(",")] if imag_txt else []
    if not re and not im:
        raise ValueError("empty polynomial")
    n = max(len(re), len(im))
    re += [Fraction(0)] * (n - len(re))
    im += [Fraction(0)] * (n - len(im))
    return Poly(CRational(a, b) for a, b in zip(re, im))


def format_poly(p: Poly) -> str:
    """Inverse of :func:`parse_poly` (zero polynomial is ``"0"``)."""
    if p.is_zero():
        return "0"
    re = ",".join(str(c.re) for c in p.coeffs)
    if p.is_real():
        return re
    return re + "+i:" + ",".join(str(c.im) for c in p.coeffs)
