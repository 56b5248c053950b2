"""Finite fields GF(p^k) with integer-encoded elements.

An element sum(c_i x^i) is encoded as the integer sum(c_i p^i), so codes run
over [0, q).  The zero and one of the field are always codes 0 and 1, and the
prime subfield is exactly the codes 0..p-1.  All bulk arithmetic is done on
numpy arrays of codes; FieldElement is a thin wrapper for the scalar API.

Supported order: q = p^deg <= 2^16.  Fields with q <= TABLE_LIMIT also carry
full q x q addition/multiplication tables for the compiled kernels.
"""

from __future__ import annotations

import numpy as np

from .errors import FieldMismatch, NonPrimeP, OrderTooLarge, ReducibleModulus

ORDER_LIMIT = 1 << 16
TABLE_LIMIT = 1024


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


def _prime_factors(n: int):
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


# ---------------------------------------------------------------------------
# dense polynomial arithmetic over GF(p), used only for field construction
# ---------------------------------------------------------------------------

def _poly_trim(a):
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_mul(a, b, p):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % p
    return _poly_trim(out)


def _poly_divmod(a, b, p):
    # b must be nonzero; returns (q, r) with a = q*b + r, deg r < deg b
    a = list(a)
    _poly_trim(a)
    db, lb = len(b) - 1, b[-1]
    inv_lb = pow(lb, p - 2, p)
    q = [0] * max(0, len(a) - db)
    while len(a) - 1 >= db and a:
        shift = len(a) - 1 - db
        c = (a[-1] * inv_lb) % p
        q[shift] = c
        for i in range(db + 1):
            a[shift + i] = (a[shift + i] - c * b[i]) % p
        _poly_trim(a)
    return q, a


def _monic_polys(deg, p):
    # all monic polynomials of exact degree `deg`, in ascending code order
    for code in range(p ** deg):
        coeffs = []
        c = code
        for _ in range(deg):
            coeffs.append(c % p)
            c //= p
        yield coeffs + [1]


def _irreducibles_up_to(deg, p, _cache={}):
    key = (deg, p)
    if key in _cache:
        return _cache[key]
    found = []
    for d in range(1, deg + 1):
        for f in _monic_polys(d, p):
            if all(_poly_divmod(f, g, p)[1] for g in found if len(g) - 1 <= d // 2):
                found.append(f)
    _cache[key] = found
    return found


def is_irreducible(modulus, p) -> bool:
    """Trial factorization by all monic irreducibles up to half the degree."""
    deg = len(modulus) - 1
    if deg < 1 or modulus[-1] != 1:
        return False
    if any(c % p != c for c in modulus):
        modulus = [c % p for c in modulus]
    if deg == 1:
        return True
    for g in _irreducibles_up_to(deg // 2, p):
        if not _poly_divmod(modulus, g, p)[1]:
            return False
    return True


def default_modulus(p, deg):
    """First monic irreducible of the given degree in code order (deterministic)."""
    if deg == 1:
        return [0, 1]
    for f in _monic_polys(deg, p):
        if is_irreducible(f, p):
            return f
    raise AssertionError("no irreducible polynomial found")  # unreachable


class FiniteField:
    """GF(p^deg) in the polynomial basis given by a monic irreducible modulus.

    Attributes:
        p: prime characteristic
        deg: extension degree over the prime field
        modulus: coefficient list (length deg+1, monic) of the defining polynomial
        q: field order p^deg
    """

    def __init__(self, p: int, deg: int, modulus=None):
        if not _is_prime(p):
            raise NonPrimeP("p = %r is not prime" % (p,))
        if deg < 1:
            raise OrderTooLarge("extension degree must be >= 1, got %r" % (deg,))
        q = p ** deg
        if q > ORDER_LIMIT:
            raise OrderTooLarge("field order %d exceeds %d" % (q, ORDER_LIMIT))
        if modulus is None:
            modulus = default_modulus(p, deg)
        modulus = [int(c) % p for c in modulus]
        if len(modulus) != deg + 1 or modulus[-1] != 1:
            raise ReducibleModulus("modulus must be monic of degree %d" % deg)
        if not is_irreducible(modulus, p):
            raise ReducibleModulus("modulus %r is reducible over GF(%d)" % (modulus, p))
        self.p = p
        self.deg = deg
        self.q = q
        self.modulus = tuple(modulus)
        self._ppow = np.array([p ** i for i in range(deg)], dtype=np.int64)
        self._build_tables()

    # -- construction helpers -------------------------------------------------

    def _code_mul_slow(self, a: int, b: int) -> int:
        # polynomial product reduced mod the modulus, from codes
        p, deg = self.p, self.deg
        da = [(a // p ** i) % p for i in range(deg)]
        db = [(b // p ** i) % p for i in range(deg)]
        prod = _poly_mul(da, db, p)
        _, r = _poly_divmod(prod, list(self.modulus), p)
        return sum(c * p ** i for i, c in enumerate(r))

    def _build_tables(self):
        p, deg, q = self.p, self.deg, self.q
        digits = np.zeros((q, deg), dtype=np.int64)
        codes = np.arange(q, dtype=np.int64)
        rest = codes.copy()
        for i in range(deg):
            digits[:, i] = rest % p
            rest //= p
        self.digits = digits

        # discrete exp/log for a fixed primitive element
        gen = None
        factors = _prime_factors(q - 1) if q > 2 else []
        for cand in range(1, q):
            if q == 2:
                gen = 1
                break
            ok = True
            for f in factors:
                if self._code_pow_slow(cand, (q - 1) // f) == 1:
                    ok = False
                    break
            if ok:
                gen = cand
                break
        assert gen is not None
        exp = np.zeros(q - 1, dtype=np.int64)
        log = np.zeros(q, dtype=np.int64)  # log[0] unused
        acc = 1
        for e in range(q - 1):
            exp[e] = acc
            log[acc] = e
            acc = self._code_mul_slow(acc, gen)
        assert acc == 1, "generator order mismatch"
        self.generator = gen
        self.exp = exp
        self.log = log

        neg = (-digits) % p
        self.neg_table = (neg @ self._ppow).astype(np.int64)
        inv = np.zeros(q, dtype=np.int64)
        if q > 2:
            inv[exp] = exp[(-log[exp]) % (q - 1)]
        inv[1] = 1
        self.inv_table = inv

        # Frobenius x -> x^p as a code table (field automorphism)
        frob = np.zeros(q, dtype=np.int64)
        frob[exp] = exp[(log[exp] * p) % (q - 1)]
        self.frob_table = frob

        if q <= TABLE_LIMIT:
            a = codes[:, None]
            b = codes[None, :]
            self.add_table = self.add_codes(a, b).astype(np.uint16)
            lg = log[1:]
            mt = np.zeros((q, q), dtype=np.uint16)
            mt[1:, 1:] = exp[(lg[:, None] + lg[None, :]) % (q - 1)].astype(np.uint16)
            self.mul_table = mt
        else:
            self.add_table = None
            self.mul_table = None

    def _code_pow_slow(self, a: int, e: int) -> int:
        r, base = 1, a
        while e:
            if e & 1:
                r = self._code_mul_slow(r, base)
            base = self._code_mul_slow(base, base)
            e >>= 1
        return r

    # -- vectorized code arithmetic -------------------------------------------

    def add_codes(self, a, b):
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if self.p == 2:
            return a ^ b
        if self.deg == 1:
            return (a + b) % self.p
        d = (self.digits[a] + self.digits[b]) % self.p
        return d @ self._ppow

    def sub_codes(self, a, b):
        return self.add_codes(a, self.neg_codes(b))

    def neg_codes(self, a):
        return self.neg_table[np.asarray(a, dtype=np.int64)]

    def mul_codes(self, a, b):
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if self.deg == 1:
            return (a * b) % self.p
        out = self.exp[(self.log[a] + self.log[b]) % (self.q - 1)]
        return np.where((a == 0) | (b == 0), 0, out)

    def inv_codes(self, a):
        a = np.asarray(a, dtype=np.int64)
        if np.any(a == 0):
            raise ZeroDivisionError("inverse of 0 in GF(%d)" % self.q)
        return self.inv_table[a]

    def sum_codes(self, a, axis=None):
        """Field sum reduction along an axis (or all axes) of a code array."""
        a = np.asarray(a, dtype=np.int64)
        if axis is None:
            axis = tuple(range(a.ndim))
        elif isinstance(axis, int):
            axis = (axis % a.ndim,)
        else:
            axis = tuple(ax % a.ndim for ax in axis)
        if self.p == 2:
            return np.bitwise_xor.reduce(a, axis=axis)
        if self.deg == 1:
            return a.sum(axis=axis) % self.p
        d = self.digits[a].sum(axis=axis) % self.p
        return d @ self._ppow

    def pow_code(self, a: int, e: int) -> int:
        if e == 0:
            return 1
        if a == 0:
            return 0
        if e < 0:
            a = int(self.inv_table[a])
            e = -e
        return int(self.exp[(int(self.log[a]) * e) % (self.q - 1)])

    def scale_codes(self, c: int, v):
        """c * v elementwise for a scalar code c and an array of codes v."""
        v = np.asarray(v, dtype=np.int64)
        if c == 0:
            return np.zeros_like(v)
        if c == 1:
            return v.copy()
        if self.deg == 1:
            return (v * c) % self.p
        out = self.exp[(self.log[v] + int(self.log[c])) % (self.q - 1)]
        return np.where(v == 0, 0, out)

    # -- element API -----------------------------------------------------------

    def element(self, code: int) -> "FieldElement":
        return FieldElement(self, int(code) % self.q)

    def from_coeffs(self, coeffs) -> "FieldElement":
        code = sum((int(c) % self.p) * self.p ** i for i, c in enumerate(coeffs))
        return self.element(code)

    def zero(self) -> "FieldElement":
        return self.element(0)

    def one(self) -> "FieldElement":
        return self.element(1)

    def elements(self):
        return [self.element(c) for c in range(self.q)]

    # -- identity --------------------------------------------------------------

    def signature(self):
        return (self.p, self.deg, self.modulus)

    def __eq__(self, other):
        return isinstance(other, FiniteField) and self.signature() == other.signature()

    def __hash__(self):
        return hash(self.signature())

    def __repr__(self):
        if self.deg == 1:
            return "GF(%d)" % self.p
        return "GF(%d^%d)" % (self.p, self.deg)


class FieldElement:
    """A single field element: a code plus its field.

    coeffs gives the polynomial-basis representation (length deg, entries
    in [0, p)).
    """

    __slots__ = ("field", "code")

    def __init__(self, field: FiniteField, code: int):
        if not 0 <= code < field.q:
            raise FieldMismatch("code %r out of range for %r" % (code, field))
        self.field = field
        self.code = code

    @property
    def coeffs(self):
        f = self.field
        return tuple(int(d) for d in f.digits[self.code])

    def _check(self, other):
        if not isinstance(other, FieldElement):
            raise TypeError("expected FieldElement, got %r" % (other,))
        if other.field != self.field:
            raise FieldMismatch("elements from different fields")
        return other

    def __add__(self, other):
        other = self._check(other)
        return FieldElement(self.field, int(self.field.add_codes(self.code, other.code)))

    def __sub__(self, other):
        other = self._check(other)
        return FieldElement(self.field, int(self.field.sub_codes(self.code, other.code)))

    def __neg__(self):
        return FieldElement(self.field, int(self.field.neg_table[self.code]))

    def __mul__(self, other):
        other = self._check(other)
        return FieldElement(self.field, int(self.field.mul_codes(self.code, other.code)))

    def __truediv__(self, other):
        other = self._check(other)
        return self * other.inverse()

    def __pow__(self, e):
        return FieldElement(self.field, self.field.pow_code(self.code, e))

    def inverse(self):
        if self.code == 0:
            raise ZeroDivisionError("inverse of 0")
        return FieldElement(self.field, int(self.field.inv_table[self.code]))

    def is_zero(self):
        return self.code == 0

    def __eq__(self, other):
        return (
            isinstance(other, FieldElement)
            and other.field == self.field
            and other.code == self.code
        )

    def __hash__(self):
        return hash((self.field.signature(), self.code))

    def __repr__(self):
        if self.field.deg == 1:
            return "%d" % self.code
        return "%r%r" % (self.coeffs, self.field)


def make_field(p: int, deg: int, modulus=None) -> FiniteField:
    """Build GF(p^deg); the modulus defaults to the first irreducible in code order."""
    return FiniteField(p, deg, modulus)


class FieldEmbedding:
    """A ring embedding GF(p^a) -> GF(p^b) fixing the prime field.

    The image of the source's polynomial generator is the smallest-code root
    of the source modulus in the target, so embeddings are deterministic.
    Validated as a homomorphism on the full source multiplication table.
    """

    def __init__(self, source: FiniteField, target: FiniteField, image_of_generator=None):
        if source.p != target.p:
            raise FieldMismatch("different characteristics: %r vs %r" % (source, target))
        if target.deg % source.deg != 0:
            raise FieldMismatch("%r does not embed in %r" % (source, target))
        self.source = source
        self.target = target
        if image_of_generator is None:
            image_of_generator = self._find_root()
        elif isinstance(image_of_generator, FieldElement):
            image_of_generator = image_of_generator.code
        self.image_of_generator = target.element(int(image_of_generator))
        self.map_table = self._build_map()
        self._validate()

    def _find_root(self) -> int:
        tgt, mod = self.target, self.source.modulus
        for c in range(tgt.q):
            acc, power = 0, 1
            for coef in mod:
                if coef:
                    acc = int(tgt.add_codes(acc, tgt.scale_codes(coef % tgt.p, power)))
                power = int(tgt.mul_codes(power, c))
            if acc == 0:
                return c
        raise FieldMismatch("source modulus has no root in target")

    def _build_map(self):
        src, tgt = self.source, self.target
        theta = self.image_of_generator.code
        # powers of theta paired with source digit vectors
        theta_pows = np.zeros(src.deg, dtype=np.int64)
        power = 1
        for i in range(src.deg):
            theta_pows[i] = power
            power = int(tgt.mul_codes(power, theta))
        table = np.zeros(src.q, dtype=np.int64)
        for a in range(src.q):
            acc = 0
            for i in range(src.deg):
                d = int(src.digits[a, i])
                if d:
                    acc = int(tgt.add_codes(acc, tgt.scale_codes(d, int(theta_pows[i]))))
            table[a] = acc
        return table

    def _validate(self):
        src, tgt, t = self.source, self.target, self.map_table
        assert t[0] == 0 and t[1] == 1
        codes = np.arange(src.q, dtype=np.int64)
        a = codes[:, None]
        b = codes[None, :]
        if not np.array_equal(t[src.add_codes(a, b)], tgt.add_codes(t[a], t[b])):
            raise FieldMismatch("embedding is not additive")
        if not np.array_equal(t[src.mul_codes(a, b)], tgt.mul_codes(t[a], t[b])):
            raise FieldMismatch("embedding is not multiplicative")
        if not np.array_equal(t[: src.p], np.arange(src.p, dtype=np.int64)):
            raise FieldMismatch("embedding moves the prime field")

    def apply_codes(self, codes):
        return self.map_table[np.asarray(codes, dtype=np.int64)]

    def __call__(self, x: FieldElement) -> FieldElement:
        if x.field != self.source:
            raise FieldMismatch("element not from the source field")
        return self.target.element(int(self.map_table[x.code]))

    def __repr__(self):
        return "FieldEmbedding(%r -> %r)" % (self.source, self.target)


def identity_embedding(field: FiniteField) -> FieldEmbedding:
    emb = FieldEmbedding.__new__(FieldEmbedding)
    emb.source = field
    emb.target = field
    emb.image_of_generator = field.element(field.p % field.q if field.deg > 1 else 0)
    emb.map_table = np.arange(field.q, dtype=np.int64)
    return emb
