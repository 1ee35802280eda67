"""Dense univariate polynomials over a prime field GF(p).

Two interchangeable kernels share one method set:

* ``PolyKernel`` stores a polynomial as a tuple of coefficients in
  ``range(p)``, lowest degree first, with no trailing zeros (``()`` is zero).
* ``BinaryPolyKernel`` (p = 2) packs the coefficients into a Python int,
  bit i being the coefficient of t^i, as is customary for GF(2)[t].

Both payload types are hashable and canonical, so equality of payloads is
equality of polynomials.
"""

from __future__ import annotations

import functools


class PolyKernel:
    def __init__(self, p: int):
        self.p = p
        self.zero = ()
        self.one = (1,)

    # conversions -----------------------------------------------------------
    def from_coeffs(self, cs):
        p = self.p
        cs = [c % p for c in cs]
        while cs and cs[-1] == 0:
            cs.pop()
        return tuple(cs)

    def coeffs(self, a) -> list[int]:
        return list(a)

    def const(self, c: int):
        c %= self.p
        return (c,) if c else ()

    def monomial(self, k: int, c: int = 1):
        return self.from_coeffs([0] * k + [c])

    # structure -------------------------------------------------------------
    def deg(self, a) -> int:
        return len(a) - 1

    def lead(self, a) -> int:
        return a[-1] if a else 0

    def is_zero(self, a) -> bool:
        return not a

    def is_const(self, a) -> bool:
        return len(a) <= 1

    # arithmetic ------------------------------------------------------------
    def add(self, a, b):
        p = self.p
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] = (out[i] + c) % p
        while out and out[-1] == 0:
            out.pop()
        return tuple(out)

    def neg(self, a):
        p = self.p
        return tuple((p - c) % p for c in a)

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def scale(self, a, c: int):
        c %= self.p
        if c == 0:
            return ()
        p = self.p
        return tuple(x * c % p for x in a)

    def mul(self, a, b):
        if not a or not b:
            return ()
        out = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    out[i + j] += x * y
        return self.from_coeffs(out)

    def divmod(self, a, b):
        if not b:
            raise ZeroDivisionError("polynomial division by zero")
        p = self.p
        inv_lead = pow(b[-1], p - 2, p)
        rem = list(a)
        db = len(b) - 1
        if len(rem) <= db:
            return (), tuple(rem)
        quo = [0] * (len(rem) - db)
        for k in range(len(rem) - 1, db - 1, -1):
            c = rem[k] % p
            if c:
                c = c * inv_lead % p
                quo[k - db] = c
                for j, y in enumerate(b):
                    rem[k - db + j] = (rem[k - db + j] - c * y) % p
        return self.from_coeffs(quo), self.from_coeffs(rem[:db])

    def monic(self, a):
        """Return ``(lead, a / lead)``."""
        if not a:
            return 0, ()
        c = a[-1]
        return c, self.scale(a, pow(c, self.p - 2, self.p))

    def gcd(self, a, b):
        while b:
            a, b = b, self.divmod(a, b)[1]
        return self.monic(a)[1]

    def frob(self, a):
        """a(t)^p = a(t^p), since coefficients are fixed by Frobenius."""
        if not a:
            return ()
        p = self.p
        out = [0] * ((len(a) - 1) * p + 1)
        for i, c in enumerate(a):
            out[i * p] = c
        return tuple(out)

    def root(self, a):
        """p-th root, or None when some exponent is not divisible by p."""
        p = self.p
        if any(c for i, c in enumerate(a) if i % p):
            return None
        return tuple(a[::p])

    def encode(self, a) -> bytes:
        return bytes([len(a) & 0xFF, len(a) >> 8]) + bytes(a)


class BinaryPolyKernel(PolyKernel):
    def __init__(self):
        super().__init__(2)
        self.zero = 0
        self.one = 1

    def from_coeffs(self, cs):
        v = 0
        for i, c in enumerate(cs):
            if c % 2:
                v |= 1 << i
        return v

    def coeffs(self, a):
        return [(a >> i) & 1 for i in range(a.bit_length())]

    def const(self, c):
        return c & 1

    def monomial(self, k, c=1):
        return (c & 1) << k

    def deg(self, a):
        return a.bit_length() - 1

    def lead(self, a):
        return 1 if a else 0

    def is_zero(self, a):
        return a == 0

    def is_const(self, a):
        return a <= 1

    def add(self, a, b):
        return a ^ b

    def neg(self, a):
        return a

    def sub(self, a, b):
        return a ^ b

    def scale(self, a, c):
        return a if c & 1 else 0

    def mul(self, a, b):
        if a.bit_length() < b.bit_length():
            a, b = b, a
        out = 0
        while b:
            low = b & -b
            out ^= a << (low.bit_length() - 1)
            b ^= low
        return out

    def divmod(self, a, b):
        if not b:
            raise ZeroDivisionError("polynomial division by zero")
        db = b.bit_length()
        q = 0
        while a.bit_length() >= db:
            s = a.bit_length() - db
            q |= 1 << s
            a ^= b << s
        return q, a

    def monic(self, a):
        return (1, a) if a else (0, 0)

    def gcd(self, a, b):
        while b:
            a, b = b, self.divmod(a, b)[1]
        return a

    def frob(self, a):
        out = 0
        i = 0
        while a:
            if a & 1:
                out |= 1 << (2 * i)
            a >>= 1
            i += 1
        return out

    def root(self, a):
        out = 0
        i = 0
        while a:
            if a & 1:
                out |= 1 << i
            if a & 2:
                return None
            a >>= 2
            i += 1
        return out

    def encode(self, a):
        n = (a.bit_length() + 7) // 8
        return bytes([n]) + a.to_bytes(n, "little")


@functools.lru_cache(maxsize=None)
def kernel(p: int) -> PolyKernel:
    return BinaryPolyKernel() if p == 2 else PolyKernel(p)


def is_irreducible(p: int, coeffs) -> bool:
    """Trial division by every monic polynomial of degree 1 .. deg/2."""
    K = PolyKernel(p)
    f = K.from_coeffs(coeffs)
    n = K.deg(f)
    if n < 1:
        return False
    if n == 1:
        return True
    for d in range(1, n // 2 + 1):
        for code in range(p ** d):
            cs = [(code // p ** i) % p for i in range(d)] + [1]
            if not K.divmod(f, tuple(cs))[1]:
                return False
    return True


def format_poly(cs, var: str) -> str:
    """Human syntax, highest degree first: ``x^2+2x+1``; zero is ``0``."""
    terms = []
    for k in range(len(cs) - 1, -1, -1):
        c = cs[k]
        if not c:
            continue
        if k == 0:
            terms.append(str(c))
        else:
            mono = var if k == 1 else f"{var}^{k}"
            terms.append(mono if c == 1 else f"{c}{mono}")
    return "+".join(terms) if terms else "0"


def parse_poly(text: str, var: str, p: int) -> list[int]:
    """Inverse of :func:`format_poly`; also accepts ``-`` and ``2*x`` forms."""
    s = text.replace(" ", "").replace("*", "")
    if not s:
        raise ValueError("empty polynomial")
    s = s.replace("-", "+-")
    out: dict[int, int] = {}
    for term in s.split("+"):
        if not term:
            continue
        sign = 1
        if term.startswith("-"):
            sign, term = -1, term[1:]
        if var in term:
            head, _, tail = term.partition(var)
            coef = int(head) if head else 1
            if tail:
                if not tail.startswith("^"):
                    raise ValueError(f"bad term {term!r}")
                exp = int(tail[1:])
            else:
                exp = 1
        else:
            coef, exp = int(term), 0
        out[exp] = out.get(exp, 0) + sign * coef
    if not out:
        raise ValueError(f"bad polynomial {text!r}")
    cs = [0] * (max(out) + 1)
    for k, c in out.items():
        cs[k] = c % p
    return cs
