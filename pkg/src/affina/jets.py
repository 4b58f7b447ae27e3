"""Truncated bivariate Taylor-series (2-jet ... n-jet) arithmetic.

A :class:`Jet2` represents a polynomial truncation

    f(u, v) = sum_{i+j <= order} c[i, j] u^i v^j

with dense triangular storage inside an (order+1) x (order+1) array.  The
coefficients here are raw monomial coefficients; the q_ij/(i! j!) convention
used by the surface normal forms lives in :mod:`affina.geometry`.

Arithmetic is exact truncation: add/mul/pow of order-n jets is again an
order-n jet, with no epsilon fuzz introduced by the module itself.  Mixing
orders is an error (:class:`~affina.errors.OrderMismatchError`); use
:meth:`Jet2.at_order` to restate a jet at another order explicitly.  Floats
are the working dtype, but exact ``fractions.Fraction`` coefficients pass
through all ring operations untouched, which the verification suite uses to
run ring-axiom checks without rounding.
"""

from __future__ import annotations

import math
import numbers
from dataclasses import dataclass, field

import numpy as np

from .errors import OrderMismatchError, SingularJetError

_TRIANGLE_MASKS: dict[int, np.ndarray] = {}


def _triangle_mask(order: int) -> np.ndarray:
    mask = _TRIANGLE_MASKS.get(order)
    if mask is None:
        idx = np.arange(order + 1)
        mask = idx[:, None] + idx[None, :] <= order
        _TRIANGLE_MASKS[order] = mask
    return mask


def _coerce_array(coeffs, order: int) -> np.ndarray:
    arr = np.asarray(coeffs)
    if arr.dtype != object:
        arr = arr.astype(float)
    out = np.zeros((order + 1, order + 1), dtype=arr.dtype)
    if arr.dtype == object:
        out[...] = 0
    n = min(arr.shape[0], order + 1)
    m = min(arr.shape[1], order + 1)
    out[:n, :m] = arr[:n, :m]
    out[~_triangle_mask(order)] = 0
    return out


@dataclass(frozen=True)
class Jet2:
    """Immutable truncated power series in two variables."""

    coeffs: np.ndarray
    order: int
    _skip_coerce: bool = field(default=False, repr=False, compare=False)

    def __post_init__(self):
        if self.order < 0:
            raise ValueError("jet order must be >= 0")
        if not self._skip_coerce:
            object.__setattr__(self, "coeffs", _coerce_array(self.coeffs, self.order))
        self.coeffs.flags.writeable = False

    # -- constructors ------------------------------------------------------

    @staticmethod
    def constant(value, order: int) -> "Jet2":
        c = np.zeros((order + 1, order + 1), dtype=object if isinstance(value, numbers.Rational) and not isinstance(value, (int, float)) else float)
        if c.dtype == object:
            c[...] = 0
        c[0, 0] = value
        return Jet2(c, order, _skip_coerce=True)

    @staticmethod
    def variables(order: int) -> tuple["Jet2", "Jet2"]:
        """The coordinate jets (u, v) at a given order."""
        if order < 1:
            raise ValueError("coordinate jets need order >= 1")
        cu = np.zeros((order + 1, order + 1))
        cv = np.zeros((order + 1, order + 1))
        cu[1, 0] = 1.0
        cv[0, 1] = 1.0
        return Jet2(cu, order, _skip_coerce=True), Jet2(cv, order, _skip_coerce=True)

    @staticmethod
    def from_terms(terms: dict, order: int) -> "Jet2":
        """Build a jet from a {(i, j): coefficient} mapping."""
        dtype = object if any(
            isinstance(val, numbers.Rational) and not isinstance(val, (int, float))
            for val in terms.values()
        ) else float
        c = np.zeros((order + 1, order + 1), dtype=dtype)
        if dtype == object:
            c[...] = 0
        for (i, j), val in terms.items():
            if i < 0 or j < 0 or i + j > order:
                raise ValueError(f"term ({i},{j}) outside jet of order {order}")
            c[i, j] = val
        return Jet2(c, order, _skip_coerce=True)

    def zero_like(self) -> "Jet2":
        z = np.zeros_like(self.coeffs)
        if z.dtype == object:
            z[...] = 0
        return Jet2(z, self.order, _skip_coerce=True)

    # -- basic queries -----------------------------------------------------

    @property
    def constant_term(self):
        return self.coeffs[0, 0]

    def coefficient(self, i: int, j: int):
        if i + j > self.order:
            return 0.0
        return self.coeffs[i, j]

    def max_abs(self) -> float:
        return float(max(abs(x) for x in self.coeffs.ravel()))

    def at_order(self, order: int) -> "Jet2":
        """Restate at another truncation order.

        Lowering the order drops tail terms; raising it pads with zeros,
        i.e. treats this jet as an exact polynomial.
        """
        if order == self.order:
            return self
        return Jet2(self.coeffs, order)

    # -- ring operations ---------------------------------------------------

    def _check_order(self, other: "Jet2"):
        if self.order != other.order:
            raise OrderMismatchError(
                f"jet orders differ: {self.order} != {other.order}"
            )

    def __add__(self, other):
        if isinstance(other, Jet2):
            self._check_order(other)
            return Jet2(self.coeffs + other.coeffs, self.order, _skip_coerce=True)
        if isinstance(other, numbers.Number) or isinstance(other, numbers.Rational):
            c = self.coeffs.copy()
            c[0, 0] = c[0, 0] + other
            return Jet2(c, self.order, _skip_coerce=True)
        return NotImplemented

    __radd__ = __add__

    def __neg__(self):
        return Jet2(-self.coeffs, self.order, _skip_coerce=True)

    def __sub__(self, other):
        if isinstance(other, Jet2):
            self._check_order(other)
            return Jet2(self.coeffs - other.coeffs, self.order, _skip_coerce=True)
        return self.__add__(-other)

    def __rsub__(self, other):
        return (-self).__add__(other)

    def __mul__(self, other):
        if isinstance(other, Jet2):
            self._check_order(other)
            n = self.order
            a, b = self.coeffs, other.coeffs
            dtype = object if (a.dtype == object or b.dtype == object) else float
            out = np.zeros((n + 1, n + 1), dtype=dtype)
            if dtype == object:
                out[...] = 0
            for i in range(n + 1):
                for j in range(n + 1 - i):
                    aij = a[i, j]
                    if aij == 0:
                        continue
                    out[i:, j:] = out[i:, j:] + aij * b[: n + 1 - i, : n + 1 - j]
            out[~_triangle_mask(n)] = 0
            return Jet2(out, n, _skip_coerce=True)
        if isinstance(other, numbers.Number) or isinstance(other, numbers.Rational):
            return Jet2(self.coeffs * other, self.order, _skip_coerce=True)
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, Jet2):
            return self * jet_pow(other, -1)
        return self * (1.0 / other)

    def __pow__(self, exponent):
        return jet_pow(self, exponent)

    # -- calculus ----------------------------------------------------------

    def partial(self, var: str) -> "Jet2":
        """Formal partial derivative; the result order drops by one."""
        if var not in ("u", "v"):
            raise ValueError("var must be 'u' or 'v'")
        n = max(self.order - 1, 0)
        out = np.zeros((n + 1, n + 1), dtype=self.coeffs.dtype)
        if out.dtype == object:
            out[...] = 0
        if var == "u":
            for i in range(1, self.order + 1):
                take = min(n + 1, self.order + 1 - i)
                out[i - 1, :take] = i * self.coeffs[i, :take]
        else:
            for j in range(1, self.order + 1):
                take = min(n + 1, self.order + 1 - j)
                out[:take, j - 1] = j * self.coeffs[:take, j]
        out[~_triangle_mask(n)] = 0
        return Jet2(out, n, _skip_coerce=True)

    def evaluate(self, du, dv):
        """Evaluate the truncated polynomial at offsets (du, dv) from the center."""
        total = 0.0 * self.coeffs[0, 0]
        # Horner along v inside each fixed power of u.
        for i in range(self.order, -1, -1):
            row = self.coeffs[i]
            acc = 0.0 * row[0]
            for j in range(self.order - i, -1, -1):
                acc = acc * dv + row[j]
            total = total * du + acc
        return total

    def shift(self, du, dv) -> "Jet2":
        """Recenter: the same polynomial written in powers of (u - du ... )."""
        n = self.order
        su = _shift_matrix(n, du)
        sv = _shift_matrix(n, dv)
        out = su.T @ (self.coeffs @ sv)
        return Jet2(out, n)

    # -- misc ---------------------------------------------------------------

    def allclose(self, other: "Jet2", tol: float = 0.0) -> bool:
        self._check_order(other)
        diff = self.coeffs - other.coeffs
        return float(max(abs(x) for x in diff.ravel())) <= tol

    def nonzero_terms(self):
        for i in range(self.order + 1):
            for j in range(self.order + 1 - i):
                if self.coeffs[i, j] != 0:
                    yield (i, j, self.coeffs[i, j])

    def __repr__(self):
        parts = []
        for i, j, c in self.nonzero_terms():
            if len(parts) == 6:
                parts.append("...")
                break
            mono = "".join(s for s in (f"u^{i}" if i else "", f"v^{j}" if j else "") if s)
            parts.append(f"{c}{('*' + mono) if mono else ''}")
        body = " + ".join(parts) if parts else "0"
        return f"Jet2[order={self.order}]({body})"


def _shift_matrix(order: int, delta) -> np.ndarray:
    """S[i, p] = C(i, p) delta^(i-p), so that coeff-vectors transform by S^T."""
    exact = isinstance(delta, numbers.Rational) and not isinstance(delta, (int, float))
    s = np.zeros((order + 1, order + 1), dtype=object if exact else float)
    if exact:
        s[...] = 0
    for i in range(order + 1):
        pw = 1 if exact else 1.0
        for k in range(i + 1):
            p = i - k
            s[i, p] = math.comb(i, p) * pw
            pw = pw * delta
    return s


# -- module-level operation names ------------------------------------------


def jet_add(a: Jet2, b: Jet2) -> Jet2:
    """Truncated sum of two jets of equal order."""
    return a + b


def jet_mul(a: Jet2, b: Jet2) -> Jet2:
    """Truncated Cauchy product of two jets of equal order."""
    return a * b


def jet_partial(a: Jet2, var: str) -> Jet2:
    """Formal partial derivative with respect to ``'u'`` or ``'v'``."""
    return a.partial(var)


def jet_pow(a: Jet2, exponent) -> Jet2:
    """Raise a jet to a real power.

    Integer exponents >= 0 are repeated truncated products.  For every other
    exponent the binomial series in the nilpotent part is used,

        a^e = a0^e * sum_k C(e, k) (a/a0 - 1)^k,

    which terminates because (a/a0 - 1) has zero constant term.  Non-integer
    exponents require a strictly positive constant term; a vanishing constant
    term is the parabolic degeneracy and raises
    :class:`~affina.errors.SingularJetError`.
    """
    if isinstance(exponent, numbers.Integral) and exponent >= 0:
        result = Jet2.constant(1.0 if a.coeffs.dtype != object else 1, a.order)
        base = a
        e = int(exponent)
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    a0 = a.constant_term
    if a0 == 0:
        raise SingularJetError(
            f"jet_pow with exponent {exponent} needs a nonzero constant term"
        )
    if not float(exponent).is_integer() and not a0 > 0:
        raise SingularJetError(
            f"jet_pow with non-integer exponent {exponent} needs a positive "
            f"constant term, got {a0}"
        )

    x = a * (1.0 / a0)
    x = x - 1.0  # nilpotent part
    # Horner evaluation of sum_k C(e, k) x^k.
    coeffs = [1.0]
    for k in range(1, a.order + 1):
        coeffs.append(coeffs[-1] * (exponent - k + 1) / k)
    result = Jet2.constant(coeffs[a.order], a.order)
    for k in range(a.order - 1, -1, -1):
        result = result * x + coeffs[k]
    scale = float(a0) ** float(exponent) if not isinstance(exponent, numbers.Integral) else float(a0) ** int(exponent)
    return result * scale


def jet_vector(components) -> tuple:
    """Convenience: tuple of jets treated as an R^3 (or R^2) valued jet."""
    return tuple(components)


def jv_add(a, b):
    return tuple(x + y for x, y in zip(a, b))


def jv_scale(a, s):
    return tuple(x * s for x in a)


def jv_dot(a, b) -> Jet2:
    out = a[0] * b[0]
    for x, y in zip(a[1:], b[1:]):
        out = out + x * y
    return out


def jv_cross(a, b) -> tuple:
    return (
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    )


def jv_partial(a, var: str) -> tuple:
    return tuple(x.partial(var) for x in a)
