"""Modular gcd of multivariate polynomials over Q(i).

Each prime ``p = 1 mod 4`` gives two homomorphisms Z[i] -> GF(p), one per
square root of -1.  In each image the gcd is computed by dense evaluation and
interpolation (Brown's algorithm), the two images are recombined into real and
imaginary parts, lifted over several primes by CRT and brought back to Q(i) by
rational reconstruction.  A candidate is returned only after exact trial
division over Q(i); callers fall back to a remainder sequence on ``None``.
"""

from __future__ import annotations

from fractions import Fraction
from math import isqrt
from typing import Dict, List, Optional, Tuple

from .numeric import GaussianRational

Mono = Tuple[int, ...]
Uni = List[int]  # dense coefficients, lowest degree first


# -- primes --------------------------------------------------------------------

def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    for q in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % q == 0:
            return n == q
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _primes(count: int, start: int = (1 << 61)) -> List[Tuple[int, int]]:
    """``count`` primes p = 1 mod 4 below ``start`` with a square root of -1."""
    out = []
    n = start - (start % 4) + 1
    while len(out) < count:
        n -= 4
        if _is_prime(n):
            c = next(c for c in range(2, 200) if pow(c, (n - 1) // 2, n) == n - 1)
            out.append((n, pow(c, (n - 1) // 4, n)))
    return out


PRIMES = _primes(16)


# -- dense univariate arithmetic mod p -----------------------------------------

def _trim(f: Uni) -> Uni:
    while f and f[-1] == 0:
        f.pop()
    return f


def _uni_gcd(f: Uni, g: Uni, p: int) -> Uni:
    f, g = _trim(list(f)), _trim(list(g))
    while g:
        inv = pow(g[-1], -1, p)
        dg = len(g) - 1
        while len(f) - 1 >= dg:
            c = f[-1] * inv % p
            shift = len(f) - 1 - dg
            for k in range(dg + 1):
                f[k + shift] = (f[k + shift] - c * g[k]) % p
            _trim(f)
            if not f:
                break
        f, g = g, f
    if not f:
        return []
    inv = pow(f[-1], -1, p)
    return [c * inv % p for c in f]


def _uni_div(f: Uni, g: Uni, p: int) -> Uni:
    """Exact quotient f/g."""
    f = list(f)
    dg = len(g) - 1
    inv = pow(g[-1], -1, p)
    q = [0] * max(len(f) - dg, 1)
    for i in range(len(f) - 1 - dg, -1, -1):
        c = f[i + dg] * inv % p
        q[i] = c
        if c:
            for k in range(dg + 1):
                f[i + k] = (f[i + k] - c * g[k]) % p
    return _trim(q)


def _uni_mul(f: Uni, g: Uni, p: int) -> Uni:
    if not f or not g:
        return []
    out = [0] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if a:
            for j, b in enumerate(g):
                out[i + j] = (out[i + j] + a * b) % p
    return out


def _uni_eval(f: Uni, t: int, p: int) -> int:
    v = 0
    for c in reversed(f):
        v = (v * t + c) % p
    return v


# -- multivariate gcd mod p ----------------------------------------------------

def _split_last(a: Dict[Mono, int]) -> Dict[Mono, Uni]:
    """View ``a`` as a polynomial in the leading variables with coefficients in GF(p)[w]."""
    out: Dict[Mono, Uni] = {}
    for e, c in a.items():
        f = out.setdefault(e[:-1], [])
        k = e[-1]
        if len(f) <= k:
            f.extend([0] * (k + 1 - len(f)))
        f[k] = c
    return out


def _lex_monic(h: Dict[Mono, int], p: int) -> Dict[Mono, int]:
    inv = pow(h[max(h)], -1, p)
    return {e: c * inv % p for e, c in h.items()}


def _gcd_mod(a: Dict[Mono, int], b: Dict[Mono, int], p: int) -> Optional[Dict[Mono, int]]:
    """Lex-monic gcd of two nonzero polynomials over GF(p); None on failure."""
    nv = len(next(iter(a)))
    if nv == 1:
        g = _uni_gcd(_split_last(a)[()], _split_last(b)[()], p)
        return {(k,): c for k, c in enumerate(g) if c}
    A, B = _split_last(a), _split_last(b)
    cont_a = cont_b = []
    for f in A.values():
        cont_a = _uni_gcd(cont_a, f, p)
    for f in B.values():
        cont_b = _uni_gcd(cont_b, f, p)
    cont = _uni_gcd(cont_a, cont_b, p)
    A = {m: _uni_div(f, cont_a, p) for m, f in A.items()}
    B = {m: _uni_div(f, cont_b, p) for m, f in B.items()}
    la, lb = A[max(A)], B[max(B)]
    gamma = _uni_gcd(la, lb, p)
    bound = len(gamma) + min(max(len(f) for f in A.values()), max(len(f) for f in B.values())) - 1
    points: List[Tuple[int, Dict[Mono, int]]] = []
    lead = None
    t = 0
    while len(points) < bound:
        t += 1
        if t > bound + 64:
            return None
        if _uni_eval(la, t, p) == 0 or _uni_eval(lb, t, p) == 0:
            continue
        ia = {m: v for m, f in A.items() if (v := _uni_eval(f, t, p))}
        ib = {m: v for m, f in B.items() if (v := _uni_eval(f, t, p))}
        g = _gcd_mod(ia, ib, p)
        if g is None:
            return None
        lm = max(g)
        if lead is None or lm < lead:
            lead, points = lm, []
        elif lm > lead:
            continue
        gt = _uni_eval(gamma, t, p)
        points.append((t, {m: c * gt % p for m, c in g.items()}))
    # Newton interpolation in w, coefficient by coefficient
    monos = sorted({m for _, g in points for m in g})
    H: Dict[Mono, Uni] = {m: [] for m in monos}
    q: Uni = [1]
    for t, g in points:
        qt_inv = pow(_uni_eval(q, t, p), -1, p)
        for m in monos:
            f = H[m]
            corr = (g.get(m, 0) - _uni_eval(f, t, p)) * qt_inv % p
            if corr:
                add = [c * corr % p for c in q]
                if len(f) < len(add):
                    f.extend([0] * (len(add) - len(f)))
                for k, c in enumerate(add):
                    f[k] = (f[k] + c) % p
                _trim(f)
        q = _uni_mul(q, [(-t) % p, 1], p)
    H = {m: f for m, f in H.items() if f}
    if not H:
        return None
    hc: Uni = []
    for f in H.values():
        hc = _uni_gcd(hc, f, p)
    out: Dict[Mono, int] = {}
    for m, f in H.items():
        for k, c in enumerate(_uni_mul(_uni_div(f, hc, p), cont, p)):
            if c:
                out[m + (k,)] = c
    return _lex_monic(out, p)


# -- lifting back to Q(i) ------------------------------------------------------

def _image(terms, p: int, root: int) -> Optional[Dict[Mono, int]]:
    out = {}
    for e, c in terms.items():
        a, b, d = c.parts
        if d % p == 0:
            return None
        v = (a + b * root) * pow(d, -1, p) % p
        if v:
            out[e] = v
    return out


def _rational_reconstruct(u: int, m: int) -> Optional[Fraction]:
    bound = isqrt(m // 2)
    r0, r1, s0, s1 = m, u % m, 0, 1
    while r1 > bound:
        qt = r0 // r1
        r0, r1 = r1, r0 - qt * r1
        s0, s1 = s1, s0 - qt * s1
    if s1 == 0 or abs(s1) > bound:
        return None
    return Fraction(r1, s1)


def _grlex(e: Mono):
    return (sum(e), e)


def modular_gcd(a, b, lift=None):
    """Monic gcd of two MultiPolys over Q(i), or None if the primes run out.

    ``lift(terms)`` builds a MultiPoly from an exponent->GaussianRational map;
    the result is accepted only if it divides both arguments exactly.
    """
    acc_re: Dict[Mono, int] = {}
    acc_im: Dict[Mono, int] = {}
    modulus = 1
    lead = None
    support = None
    lm_a = max(a.terms, key=_grlex)
    lm_b = max(b.terms, key=_grlex)
    last = None
    for p, root in PRIMES:
        images = []
        for r in (root, p - root):
            ia, ib = _image(a.terms, p, r), _image(b.terms, p, r)
            if ia is None or ib is None or lm_a not in ia or lm_b not in ib:
                break
            g = _gcd_mod(ia, ib, p)
            if g is None:
                break
            inv = pow(g[max(g, key=_grlex)], -1, p)
            images.append({e: c * inv % p for e, c in g.items()})
        if len(images) < 2:
            continue
        h1, h2 = images
        lm = max(h1, key=_grlex)
        if max(h2, key=_grlex) != lm:
            continue
        keys = set(h1) | set(h2)
        if lead is None or _grlex(lm) < _grlex(lead):
            lead, support, acc_re, acc_im, modulus, last = lm, keys, {}, {}, 1, None
        elif _grlex(lm) > _grlex(lead):
            continue
        else:
            support = support | keys
        half = pow(2, -1, p)
        inv_root = pow(2 * root, -1, p)
        new_re, new_im = {}, {}
        for e in support:
            u1, u2 = h1.get(e, 0), h2.get(e, 0)
            re_p, im_p = (u1 + u2) * half % p, (u1 - u2) * inv_root % p
            for acc, new, v in ((acc_re, new_re, re_p), (acc_im, new_im, im_p)):
                old = acc.get(e, 0)
                # CRT: x = old mod modulus, x = v mod p
                x = old + modulus * ((v - old) * pow(modulus, -1, p) % p)
                new[e] = x
        acc_re, acc_im, modulus = new_re, new_im, modulus * p
        terms = {}
        ok = True
        for e in support:
            re = _rational_reconstruct(acc_re[e], modulus)
            im = _rational_reconstruct(acc_im[e], modulus)
            if re is None or im is None:
                ok = False
                break
            if re or im:
                terms[e] = GaussianRational(re, im)
        if not ok or terms == last:
            continue
        last = terms
        g = lift(terms)
        if g.divides(a) and g.divides(b):
            return g
    return None
