"""Exact arithmetic in the rings Z[c], c = 2cos(pi/m).

Root coordinates of the non-crystallographic types (H_3, H_4, I_2(m)) live
in these rings; the crystallographic types use m = 2, where c = 0 and the
ring collapses to the integers.  Elements are coefficient tuples with respect
to the power basis 1, c, c^2, ..., reduced modulo the minimal polynomial of c.
"""

from __future__ import annotations

from functools import lru_cache


def _poly_divmod(num: list[int], den: list[int]) -> tuple[list[int], list[int]]:
    # Coefficients are little-endian; den must be monic.
    num = list(num)
    q = [0] * max(len(num) - len(den) + 1, 1)
    for shift in range(len(num) - len(den), -1, -1):
        coef = num[shift + len(den) - 1]
        q[shift] = coef
        if coef:
            for j, d in enumerate(den):
                num[shift + j] -= coef * d
    rem = num[: len(den) - 1]
    return q, rem


def _poly_mul(p: list[int], q: list[int]) -> list[int]:
    out = [0] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a:
            for j, b in enumerate(q):
                out[i + j] += a * b
    return out


def _trim(p: list[int]) -> list[int]:
    while len(p) > 1 and p[-1] == 0:
        p = p[:-1]
    return p


@lru_cache(maxsize=None)
def cyclotomic(n: int) -> tuple[int, ...]:
    """Coefficients (little-endian) of the n-th cyclotomic polynomial."""
    num = [-1] + [0] * (n - 1) + [1]
    for d in range(1, n):
        if n % d == 0:
            num, rem = _poly_divmod(num, list(cyclotomic(d)))
            assert not any(rem)
    return tuple(_trim(num))


@lru_cache(maxsize=None)
def minimal_polynomial_2cos(m: int) -> tuple[int, ...]:
    """Monic minimal polynomial of 2cos(pi/m) over Q, little-endian.

    Uses x^-d * Phi_{2m}(x) = Psi(x + 1/x) and x^k + x^-k = T_k(x + 1/x).
    """
    if m < 2:
        raise ValueError(f"m must be >= 2, got {m}")
    phi = list(cyclotomic(2 * m))
    d = (len(phi) - 1) // 2
    # Chebyshev-like T_k in y: T_0 = 2, T_1 = y.
    t_prev, t_cur = [2], [0, 1]
    psi = [phi[d]]
    for k in range(1, d + 1):
        coef = phi[d + k]
        term = t_cur
        psi = [a + b for a, b in _zip_pad(psi, [coef * c for c in term])]
        t_prev, t_cur = t_cur, [a - b for a, b in _zip_pad([0] + t_cur, t_prev)]
    psi = _trim(psi)
    assert psi[-1] == 1
    return tuple(psi)


def _zip_pad(p: list[int], q: list[int]):
    n = max(len(p), len(q))
    return zip(p + [0] * (n - len(p)), q + [0] * (n - len(q)))


class ScalarRing:
    """The ring Z[2cos(pi/m)] with exact element arithmetic."""

    _instances: dict[int, ScalarRing] = {}

    def __new__(cls, m: int) -> ScalarRing:
        if m not in cls._instances:
            inst = super().__new__(cls)
            inst.m = m
            inst.modulus = minimal_polynomial_2cos(m)
            inst.degree = len(inst.modulus) - 1
            cls._instances[m] = inst
        return cls._instances[m]

    def __repr__(self) -> str:
        return f"ScalarRing({self.m})"

    def __reduce__(self):
        return (ScalarRing, (self.m,))

    def __call__(self, value: int | tuple[int, ...] | Scalar) -> Scalar:
        if isinstance(value, Scalar):
            if value.ring is not self:
                raise ValueError("scalar belongs to a different ring")
            return value
        if isinstance(value, int):
            return Scalar(self, (value,) + (0,) * (self.degree - 1))
        coeffs = list(value)
        if len(coeffs) > self.degree:
            _, coeffs = _poly_divmod(coeffs, list(self.modulus))
        coeffs = coeffs + [0] * (self.degree - len(coeffs))
        return Scalar(self, tuple(coeffs))

    @property
    def zero(self) -> Scalar:
        return self(0)

    @property
    def one(self) -> Scalar:
        return self(1)

    @property
    def generator(self) -> Scalar:
        """The element c = 2cos(pi/m)."""
        return self((0, 1))


class Scalar:
    """An element of a ScalarRing; immutable and hashable."""

    __slots__ = ("ring", "coeffs")

    def __init__(self, ring: ScalarRing, coeffs: tuple[int, ...]):
        self.ring = ring
        self.coeffs = coeffs

    def _coerce(self, other) -> Scalar:
        if isinstance(other, Scalar):
            if other.ring is not self.ring:
                raise ValueError("mixed rings")
            return other
        if isinstance(other, int):
            return self.ring(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return Scalar(self.ring, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    __radd__ = __add__

    def __neg__(self) -> Scalar:
        return Scalar(self.ring, tuple(-a for a in self.coeffs))

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if self.ring.degree == 1:
            return Scalar(self.ring, (self.coeffs[0] * other.coeffs[0],))
        prod = _poly_mul(list(self.coeffs), list(other.coeffs))
        return self.ring(tuple(prod))

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            other = self.ring(other)
        if not isinstance(other, Scalar):
            return NotImplemented
        return self.ring is other.ring and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash((self.ring.m, self.coeffs))

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def __repr__(self) -> str:
        terms = []
        for k, c in enumerate(self.coeffs):
            if c:
                terms.append(f"{c}" if k == 0 else f"{c}*c" if k == 1 else f"{c}*c^{k}")
        return " + ".join(terms) if terms else "0"
