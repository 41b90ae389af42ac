"""Exact scalar fields for the cohomology stack.

Four composable layers, towers at most two deep:

* ``QQ`` -- arbitrary-precision rationals (``fractions.Fraction``).
* ``QuadraticField(d)`` -- the real quadratic extension Q(sqrt d),
  d a squarefree integer >= 2; elements are ``u + v*sqrt(d)``.
* ``FunctionField(base, name)`` -- rational functions in one formal
  parameter over QQ or a quadratic field.
* ``ComplexField(base)`` -- the pair field base(i); complexifies any
  real tower.

Every element is immutable and normalised at construction (reduced
fractions, coprime numerator/denominator with monic denominator for
function-field elements), so ``==`` is canonical, decidable equality.
All operations are pure functions; values are safe to share between
threads.

Real towers additionally expose a deterministic ``sign``: exact for
rationals and quadratic surds, and a formal leading-coefficient
convention for function-field elements (used only to fix coordinate
normalisations, never for numeric verdicts).
"""

from __future__ import annotations

from fractions import Fraction


def as_fraction(x):
    """Coerce an int or Fraction to Fraction; reject everything else."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    raise TypeError(f"expected a rational number, got {type(x).__name__}")


def is_squarefree(n: int) -> bool:
    if n <= 0:
        return False
    p = 2
    while p * p <= n:
        if n % (p * p) == 0:
            return False
        p += 1
    return True


def square_split(n: int) -> tuple[int, int]:
    """Write n > 0 as s^2 * d with d squarefree; return (s, d)."""
    if n <= 0:
        raise ValueError("square_split needs a positive integer")
    s, d, p = 1, n, 2
    while p * p <= d:
        while d % (p * p) == 0:
            d //= p * p
            s *= p
        p += 1
    return s, d


def _inv(x):
    """Multiplicative inverse of a scalar of any supported element type."""
    if isinstance(x, Fraction):
        return 1 / x
    return x.inverse()


class QuadSurd:
    """Element u + v*sqrt(d) of Q(sqrt d)."""

    __slots__ = ("u", "v", "d")

    def __init__(self, u, v, d: int):
        object.__setattr__(self, "u", as_fraction(u))
        object.__setattr__(self, "v", as_fraction(v))
        object.__setattr__(self, "d", d)

    def __setattr__(self, *a):
        raise AttributeError("QuadSurd is immutable")

    def _co(self, other):
        if isinstance(other, QuadSurd):
            if other.d != self.d:
                raise TypeError("mixing distinct quadratic fields")
            return other
        if isinstance(other, (int, Fraction)):
            return QuadSurd(other, 0, self.d)
        return None

    def __add__(self, other):
        o = self._co(other)
        if o is None:
            return NotImplemented
        return QuadSurd(self.u + o.u, self.v + o.v, self.d)

    __radd__ = __add__

    def __neg__(self):
        return QuadSurd(-self.u, -self.v, self.d)

    def __sub__(self, other):
        o = self._co(other)
        if o is None:
            return NotImplemented
        return QuadSurd(self.u - o.u, self.v - o.v, self.d)

    def __rsub__(self, other):
        o = self._co(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        o = self._co(other)
        if o is None:
            return NotImplemented
        return QuadSurd(
            self.u * o.u + self.v * o.v * self.d,
            self.u * o.v + self.v * o.u,
            self.d,
        )

    __rmul__ = __mul__

    def inverse(self):
        n = self.u * self.u - self.v * self.v * self.d
        if n == 0:
            raise ZeroDivisionError("inverse of zero quadratic surd")
        return QuadSurd(self.u / n, -self.v / n, self.d)

    def __truediv__(self, other):
        o = self._co(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._co(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.v == 0 and self.u == other
        if isinstance(other, QuadSurd):
            return self.d == other.d and self.u == other.u and self.v == other.v
        return NotImplemented

    def __hash__(self):
        if self.v == 0:
            return hash(self.u)
        return hash((self.u, self.v, self.d))

    def __bool__(self):
        return self.u != 0 or self.v != 0

    def sign(self) -> int:
        """Exact sign of the real number u + v*sqrt(d)."""
        su = (self.u > 0) - (self.u < 0)
        sv = (self.v > 0) - (self.v < 0)
        if sv == 0:
            return su
        if su == 0 or su == sv:
            return sv
        # opposite signs: compare u^2 against v^2 d
        lhs, rhs = self.u * self.u, self.v * self.v * self.d
        if lhs == rhs:
            raise ArithmeticError("sqrt(d) rational; d was not squarefree")
        return su if lhs > rhs else sv

    def __repr__(self):
        return f"QuadSurd({self.u}, {self.v}, d={self.d})"

    def __str__(self):
        if self.v == 0:
            return str(self.u)
        s = "" if self.u == 0 else f"{self.u}"
        term = f"{self.v}*sqrt{self.d}" if self.v != 1 else f"sqrt{self.d}"
        if s and self.v > 0:
            return f"{s}+{term}"
        return s + term if s else term


# ---------------------------------------------------------------------------
# dense univariate polynomials over a real base field, as coefficient tuples
# (ascending degree, trailing zeros stripped; () is the zero polynomial)

def p_trim(c):
    c = list(c)
    while c and not c[-1]:
        c.pop()
    return tuple(c)


def p_add(a, b):
    n = max(len(a), len(b))
    out = []
    for i in range(n):
        x = a[i] if i < len(a) else 0
        y = b[i] if i < len(b) else 0
        out.append(x + y)
    return p_trim(out)


def p_neg(a):
    return tuple(-x for x in a)


def p_mul(a, b, zero):
    if not a or not b:
        return ()
    out = [zero] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if not x:
            continue
        for j, y in enumerate(b):
            out[i + j] = out[i + j] + x * y
    return p_trim(out)


def p_divmod(a, b, zero):
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    q = [zero] * max(0, len(a) - len(b) + 1)
    r = list(a)
    inv_lead = _inv(b[-1])
    while len(r) >= len(b) and p_trim(r):
        r = list(p_trim(r))
        if len(r) < len(b):
            break
        k = len(r) - len(b)
        f = r[-1] * inv_lead
        q[k] = f
        for i, y in enumerate(b):
            r[k + i] = r[k + i] - f * y
        r = list(p_trim(r))
    return p_trim(q), p_trim(r)


def p_gcd(a, b, zero):
    """Monic gcd via Euclid."""
    a, b = p_trim(a), p_trim(b)
    while b:
        _, r = p_divmod(a, b, zero)
        a, b = b, r
    if not a:
        return ()
    inv_lead = _inv(a[-1])
    return tuple(x * inv_lead for x in a)


def p_eval(a, x, zero):
    acc = zero
    for c in reversed(a):
        acc = acc * x + c
    return acc


class RationalFunction:
    """Quotient of polynomials in one formal parameter over a real base
    field; stored reduced with monic denominator."""

    __slots__ = ("num", "den", "field")

    def __init__(self, num, den, field, _reduced=False):
        num, den = p_trim(num), p_trim(den)
        if not den:
            raise ZeroDivisionError("zero denominator")
        if not _reduced:
            z = field.base.zero()
            g = p_gcd(num, den, z)
            if g and g != (field.base.one(),):
                num, _ = p_divmod(num, g, z)
                den, _ = p_divmod(den, g, z)
            inv_lead = _inv(den[-1])
            num = tuple(x * inv_lead for x in num)
            den = tuple(x * inv_lead for x in den)
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)
        object.__setattr__(self, "field", field)

    def __setattr__(self, *a):
        raise AttributeError("RationalFunction is immutable")

    def _co(self, other):
        if isinstance(other, RationalFunction):
            if other.field is not self.field and other.field != self.field:
                raise TypeError("mixing distinct function fields")
            return other
        try:
            c = self.field.base.coerce(other)
        except TypeError:
            return None
        return RationalFunction((c,), (self.field.base.one(),), self.field,
                                _reduced=True)

    def __add__(self, other):
        o = self._co(other)
        if o is None:
            return NotImplemented
        z = self.field.base.zero()
        num = p_add(p_mul(self.num, o.den, z), p_mul(o.num, self.den, z))
        return RationalFunction(num, p_mul(self.den, o.den, z), self.field)

    __radd__ = __add__

    def __neg__(self):
        return RationalFunction(p_neg(self.num), self.den, self.field,
                                _reduced=True)

    def __sub__(self, other):
        o = self._co(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._co(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        o = self._co(other)
        if o is None:
            return NotImplemented
        z = self.field.base.zero()
        return RationalFunction(p_mul(self.num, o.num, z),
                                p_mul(self.den, o.den, z), self.field)

    __rmul__ = __mul__

    def inverse(self):
        if not self.num:
            raise ZeroDivisionError("inverse of zero rational function")
        return RationalFunction(self.den, self.num, self.field)

    def __truediv__(self, other):
        o = self._co(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._co(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __eq__(self, other):
        o = self._co(other) if not isinstance(other, RationalFunction) else other
        if o is None:
            return NotImplemented
        return self.num == o.num and self.den == o.den

    def __hash__(self):
        return hash((self.num, self.den))

    def __bool__(self):
        return bool(self.num)

    def sign(self) -> int:
        """Formal sign convention: sign of the leading numerator
        coefficient (the denominator is monic)."""
        if not self.num:
            return 0
        return self.field.base.sign(self.num[-1])

    def __repr__(self):
        return f"RationalFunction({self.num}, {self.den})"

    def __str__(self):
        t = self.field.name

        def fmt(poly):
            terms = []
            for k, c in enumerate(poly):
                if not c:
                    continue
                if k == 0:
                    terms.append(str(c))
                elif k == 1:
                    terms.append(f"{c}*{t}" if c != 1 else t)
                else:
                    terms.append(f"{c}*{t}^{k}" if c != 1 else f"{t}^{k}")
            return " + ".join(terms) if terms else "0"

        if self.den == (self.field.base.one(),):
            return fmt(self.num)
        return f"({fmt(self.num)})/({fmt(self.den)})"


class ComplexScalar:
    """Element re + i*im of the pair field K(i) over a real field K."""

    __slots__ = ("re", "im")

    def __init__(self, re, im):
        object.__setattr__(self, "re", re)
        object.__setattr__(self, "im", im)

    def __setattr__(self, *a):
        raise AttributeError("ComplexScalar is immutable")

    def __add__(self, other):
        o = other if isinstance(other, ComplexScalar) else None
        if o is None:
            try:
                return ComplexScalar(self.re + other, self.im)
            except TypeError:
                return NotImplemented
        return ComplexScalar(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __neg__(self):
        return ComplexScalar(-self.re, -self.im)

    def __sub__(self, other):
        if isinstance(other, ComplexScalar):
            return ComplexScalar(self.re - other.re, self.im - other.im)
        try:
            return ComplexScalar(self.re - other, self.im)
        except TypeError:
            return NotImplemented

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, ComplexScalar):
            return ComplexScalar(self.re * other.re - self.im * other.im,
                                 self.re * other.im + self.im * other.re)
        try:
            return ComplexScalar(self.re * other, self.im * other)
        except TypeError:
            return NotImplemented

    __rmul__ = __mul__

    def conj(self):
        return ComplexScalar(self.re, -self.im)

    def inverse(self):
        n = self.re * self.re + self.im * self.im
        if not n:
            raise ZeroDivisionError("inverse of zero complex scalar")
        ninv = _inv(n)
        return ComplexScalar(self.re * ninv, -self.im * ninv)

    def __truediv__(self, other):
        if isinstance(other, ComplexScalar):
            return self * other.inverse()
        try:
            return self * _inv(_coerce_real_like(other, self.re))
        except TypeError:
            return NotImplemented

    def __rtruediv__(self, other):
        inv = self.inverse()
        return inv * other

    def __eq__(self, other):
        if isinstance(other, ComplexScalar):
            return self.re == other.re and self.im == other.im
        if isinstance(other, (int, Fraction, QuadSurd, RationalFunction)):
            return not self.im and self.re == other
        return NotImplemented

    def __hash__(self):
        if not self.im:
            return hash(self.re)
        return hash((self.re, self.im))

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __repr__(self):
        return f"ComplexScalar({self.re!r}, {self.im!r})"

    def __str__(self):
        if not self.im:
            return str(self.re)
        if not self.re:
            return f"i*({self.im})" if str(self.im) not in ("1",) else "i"
        return f"({self.re}) + i*({self.im})"


def _coerce_real_like(x, model):
    """Coerce x to the element type of ``model`` (a real-tower element)."""
    if isinstance(model, Fraction):
        return as_fraction(x)
    if isinstance(model, QuadSurd):
        if isinstance(x, QuadSurd):
            if x.d != model.d:
                raise TypeError("mixing quadratic fields")
            return x
        return QuadSurd(as_fraction(x), 0, model.d)
    if isinstance(model, RationalFunction):
        return model.field.coerce(x)
    raise TypeError(f"cannot coerce {x!r}")


# ---------------------------------------------------------------------------
# field descriptor objects


class RationalField:
    """The field Q; elements are fractions.Fraction."""

    name = "QQ"
    is_complex = False

    def zero(self):
        return Fraction(0)

    def one(self):
        return Fraction(1)

    def from_int(self, n: int):
        return Fraction(n)

    def coerce(self, x):
        if isinstance(x, Fraction):
            return x
        if isinstance(x, int):
            return Fraction(x)
        if isinstance(x, QuadSurd) and x.v == 0:
            return x.u
        raise TypeError(f"cannot coerce {x!r} into QQ")

    def sign(self, x) -> int:
        return (x > 0) - (x < 0)

    def pivot_key(self, x) -> int:
        return abs(x.numerator)

    def q_labels(self, x):
        """Decompose into rational coefficients on the monomial basis
        {sqrt(d)^eps * t^k}; labels are (eps, k) pairs."""
        return {(0, 0): x} if x else {}

    def __eq__(self, other):
        return isinstance(other, RationalField)

    def __hash__(self):
        return hash("QQ")

    def __repr__(self):
        return "QQ"


class QuadraticField:
    """Q(sqrt d) for a squarefree integer d >= 2."""

    is_complex = False

    def __init__(self, d: int):
        if d < 2 or not is_squarefree(d):
            raise ValueError(f"d must be a squarefree integer >= 2, got {d}")
        self.d = d
        self.name = f"QQ(sqrt{d})"

    def zero(self):
        return QuadSurd(0, 0, self.d)

    def one(self):
        return QuadSurd(1, 0, self.d)

    def gen(self):
        return QuadSurd(0, 1, self.d)

    def from_int(self, n: int):
        return QuadSurd(n, 0, self.d)

    def coerce(self, x):
        if isinstance(x, QuadSurd):
            if x.d != self.d:
                raise TypeError("quadratic surd from a different field")
            return x
        if isinstance(x, (int, Fraction)):
            return QuadSurd(x, 0, self.d)
        raise TypeError(f"cannot coerce {x!r} into {self.name}")

    def sign(self, x) -> int:
        return self.coerce(x).sign()

    def pivot_key(self, x) -> int:
        x = self.coerce(x)
        return abs(x.u.numerator) + abs(x.v.numerator)

    def q_labels(self, x):
        x = self.coerce(x)
        out = {}
        if x.u:
            out[(0, 0)] = x.u
        if x.v:
            out[(1, 0)] = x.v
        return out

    def __eq__(self, other):
        return isinstance(other, QuadraticField) and other.d == self.d

    def __hash__(self):
        return hash(("quad", self.d))

    def __repr__(self):
        return self.name


class FunctionField:
    """Rational functions base(t) in one formal parameter."""

    is_complex = False

    def __init__(self, base, name: str = "t"):
        if isinstance(base, (FunctionField, ComplexField)):
            raise ValueError("function-field towers are at most two deep")
        self.base = base
        self.name = name
        self.field_name = f"{base.name}({name})"

    def zero(self):
        return RationalFunction((), (self.base.one(),), self, _reduced=True)

    def one(self):
        return RationalFunction((self.base.one(),), (self.base.one(),), self,
                                _reduced=True)

    def gen(self):
        return RationalFunction((self.base.zero(), self.base.one()),
                                (self.base.one(),), self, _reduced=True)

    def from_int(self, n: int):
        return self.coerce(n)

    def coerce(self, x):
        if isinstance(x, RationalFunction):
            if x.field != self:
                raise TypeError("rational function from a different field")
            return x
        c = self.base.coerce(x)
        if not c:
            return self.zero()
        return RationalFunction((c,), (self.base.one(),), self, _reduced=True)

    def sign(self, x) -> int:
        return self.coerce(x).sign()

    def pivot_key(self, x) -> int:
        return 0

    def q_labels(self, x):
        """Labels (eps, k) for sqrt^eps * t^k.  Requires a polynomial
        element (constant denominator)."""
        x = self.coerce(x)
        if x.den != (self.base.one(),):
            raise ValueError(
                "element leaves the declared rational span "
                f"(non-constant denominator): {x}")
        out = {}
        for k, c in enumerate(x.num):
            for (eps, _), q in self.base.q_labels(c).items():
                out[(eps, k)] = q
        return out

    def __eq__(self, other):
        return (isinstance(other, FunctionField) and other.base == self.base
                and other.name == self.name)

    def __hash__(self):
        return hash(("func", self.base, self.name))

    def __repr__(self):
        return self.field_name


class ComplexField:
    """The pair field K(i) over a real tower K."""

    is_complex = True

    def __init__(self, base):
        if getattr(base, "is_complex", False):
            raise ValueError("base of a complex field must be real")
        self.base = base
        self.name = f"{base.name}(i)"

    def zero(self):
        return ComplexScalar(self.base.zero(), self.base.zero())

    def one(self):
        return ComplexScalar(self.base.one(), self.base.zero())

    def i(self):
        return ComplexScalar(self.base.zero(), self.base.one())

    def from_int(self, n: int):
        return ComplexScalar(self.base.from_int(n), self.base.zero())

    def coerce(self, x):
        if isinstance(x, ComplexScalar):
            return ComplexScalar(self.base.coerce(x.re), self.base.coerce(x.im))
        return ComplexScalar(self.base.coerce(x), self.base.zero())

    def sign(self, x):
        raise TypeError("complex scalars have no sign")

    def pivot_key(self, x) -> int:
        x = self.coerce(x)
        return self.base.pivot_key(x.re) + self.base.pivot_key(x.im)

    def conj(self, x):
        return self.coerce(x).conj()

    def __eq__(self, other):
        return isinstance(other, ComplexField) and other.base == self.base

    def __hash__(self):
        return hash(("cx", self.base))

    def __repr__(self):
        return self.name


QQ = RationalField()


def build_field(surd_d: int | None = None, parameter: str | None = None):
    """Assemble the real tower QQ [ (sqrt d) ] [ (parameter) ]."""
    field = QuadraticField(surd_d) if surd_d is not None else QQ
    if parameter is not None:
        field = FunctionField(field, parameter)
    return field


def complexify(field):
    if getattr(field, "is_complex", False):
        return field
    return ComplexField(field)


def embed(x, src, dst):
    """Embed an element of field ``src`` into a larger tower ``dst``."""
    if src == dst:
        return x
    if isinstance(dst, ComplexField):
        if isinstance(src, ComplexField):
            return ComplexScalar(embed(x.re, src.base, dst.base),
                                 embed(x.im, src.base, dst.base))
        return ComplexScalar(embed(x, src, dst.base), dst.base.zero())
    if isinstance(dst, FunctionField):
        if isinstance(src, FunctionField):
            raise TypeError("cannot embed between distinct function fields")
        c = dst.base.coerce(embed(x, src, dst.base))
        return dst.coerce(c)
    if isinstance(dst, QuadraticField):
        return dst.coerce(x)
    return dst.coerce(x)


def substitute_parameter(x, src: FunctionField, dst, value):
    """Evaluate a function-field element at ``value`` (an element of
    ``dst``); base coefficients are embedded into ``dst``."""
    x = src.coerce(x)
    z = dst.zero()
    num = p_eval([embed(c, src.base, dst) for c in x.num], value, z)
    den = p_eval([embed(c, src.base, dst) for c in x.den], value, z)
    if not den:
        raise ZeroDivisionError("substitution hits a pole")
    return num * _inv(den)
