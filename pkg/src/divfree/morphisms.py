"""Structure-preserving maps between divergence-free algebras and derivations
of a single one.

* :func:`psi_map` is the t-twisted automorphism of W that moves rho when
  l1 >= 1.
* :func:`group_induced_map` lifts a block group element to a map
  S(Gamma, rho) -> S(g Gamma, g rho) and validates it before returning.
* :class:`DerivationHandle` covers ad u, ad x^rho d, additive characters
  and sums of those.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Sequence, Tuple, Union

from . import qq
from .algebra import AlgebraElement, AlgebraParams, DerivationVector, _accumulate, pairing
from .errors import (
    InvalidHandle,
    InvariantMismatch,
    LengthMismatch,
    LiftValidationFailed,
    NotInGamma,
    NotInS,
    RequiresL1,
    WitnessInvalid,
)
from .lattice import GroupElement, act_lattice, act_vector
from .linalg import Echelon
from .witt import WittElement, bracket, grade_decompose, is_in_S


# ---------------------------------------------------------------- psi


def _check_shifts(params: AlgebraParams, shifts) -> List[tuple]:
    if params.l1 == 0:
        raise RequiresL1("the t-twist needs at least one t-variable of the first kind (l1 >= 1)")
    shifts = [qq.qvec(s) for s in shifts]
    if len(shifts) != params.l1:
        raise InvariantMismatch(f"expected {params.l1} shift vectors, got {len(shifts)}")
    for s in shifts:
        if len(s) != params.n:
            raise LengthMismatch(f"shift vectors need {params.n} entries")
        if s not in params.gamma:
            raise NotInGamma(f"shift {tuple(map(qq.fmt_q, s))} is not in Gamma")
    return shifts


def rho_shift_target(params: AlgebraParams, shifts) -> tuple:
    """rho + sum of the shifts: the twist of :func:`psi_map` sends S(rho) into
    S(rho + sum)."""
    shifts = _check_shifts(params, shifts)
    out = params.rho
    for s in shifts:
        out = qq.vadd(out, s)
    return out


def psi_map(params: AlgebraParams, shifts, u: WittElement) -> WittElement:
    """Conjugate u by the algebra automorphism x^{alpha} t^i -> x^{alpha - sum_p i_p s_p} t^i.

    Explicitly, for s = shifts::

        x^{alpha,i} d_q -> x^{alpha - sum i_p s_p + s_q, i} d_q                     (q <= l1)
        x^{alpha,i} d_q -> x^{alpha - sum i_p s_p, i} (d_q + sum_p (s_p)_{q-l1} t_p d_p)   (q > l1)

    The result lives in the algebra with rho replaced by rho + sum s_p.
    """
    shifts = _check_shifts(params, shifts)
    target = params.with_rho(rho_shift_target(params, shifts))
    l1 = params.l1
    terms: Dict = {}
    for (alpha, ivec, q), c in u.terms.items():
        base = alpha
        for p in range(l1):
            if ivec[p]:
                base = qq.vsub(base, qq.vscale(ivec[p], shifts[p]))
        if q <= l1:
            _accumulate(terms, (qq.vadd(base, shifts[q - 1]), ivec, q), c)
            continue
        _accumulate(terms, (base, ivec, q), c)
        k = q - l1 - 1
        for p in range(1, l1 + 1):
            coef = shifts[p - 1][k]
            if coef:
                raised = ivec[: p - 1] + (ivec[p - 1] + 1,) + ivec[p:]
                _accumulate(terms, (base, raised, p), c * coef)
    return WittElement._raw(target, terms)


def normalize_rho(params: AlgebraParams) -> Tuple[AlgebraParams, Optional[List[tuple]]]:
    """For l1 >= 1 return (params with rho = 0, shifts taking rho to 0);
    for l1 = 0, rho is an invariant and is returned unchanged with shifts None."""
    if params.l1 == 0:
        return params, None
    shifts = [tuple(-r for r in params.rho)] + [qq.zeros(params.n)] * (params.l1 - 1)
    return params.with_rho(None), shifts


# ---------------------------------------------------------------- group lift


def _poly_power(lin: Dict[int, Fraction], e: int) -> Dict[tuple, Fraction]:
    """(sum_k lin[k] t_k)^e as {exponent tuple over the keys: coeff}."""
    keys = sorted(lin)
    out: Dict[tuple, Fraction] = {tuple(0 for _ in keys): Fraction(1)}
    for _ in range(e):
        nxt: Dict[tuple, Fraction] = {}
        for mono, c in out.items():
            for idx, k in enumerate(keys):
                m2 = mono[:idx] + (mono[idx] + 1,) + mono[idx + 1 :]
                _accumulate(nxt, m2, c * lin[k])
        out = nxt
    return {tuple(zip(keys, mono)): c for mono, c in out.items()}


@dataclass
class InducedMap:
    """The validated lift of a group element; call it on WittElements."""

    source: AlgebraParams
    target: AlgebraParams
    g: GroupElement
    checks: Dict[str, int] = field(default_factory=dict)

    def __post_init__(self):
        l1, l2, n = self.source.l1, self.source.l2, self.source.n
        self._ginv = qq.inverse(self.g.matrix()) if n else ()
        gm = self.g.matrix()
        ainv = qq.inverse(self.g.A) if l2 else ()
        # t_{l1+j} -> sum_k (A^{-1})_{jk} t'_{l1+k}
        self._tsub = [{l1 + k + 1: ainv[j][k] for k in range(l2) if ainv[j][k]} for j in range(l2)]
        # d_{l1+j} -> sum_k g_{kj} d'_{l1+k}
        self._dimg = []
        for p in range(1, self.source.ell + 1):
            if p <= l1:
                self._dimg.append({p: Fraction(1)})
            else:
                j = p - l1 - 1
                self._dimg.append({l1 + k + 1: gm[k][j] for k in range(n) if gm[k][j]})
        self._inner_source, self._pre = normalize_rho(self.source)
        self._inner_target, _ = normalize_rho(self.target)
        self._post = None
        if self.target.l1:
            self._post = [tuple(self.target.rho)] + [qq.zeros(n)] * (l1 - 1)

    def _sigma_monomial(self, alpha, ivec) -> Dict[tuple, Fraction]:
        l1, l2 = self.source.l1, self.source.l2
        new_alpha = qq.row_times(alpha, self._ginv) if self.source.n else alpha
        out: Dict[tuple, Fraction] = {(ivec[:l1] + (0,) * l2): Fraction(1)}
        for j in range(l2):
            e = ivec[l1 + j]
            if not e:
                continue
            nxt: Dict[tuple, Fraction] = {}
            for mono, c in out.items():
                for pairs, c2 in _poly_power(self._tsub[j], e).items():
                    m2 = list(mono)
                    for k, ek in pairs:
                        m2[k - 1] += ek
                    _accumulate(nxt, tuple(m2), c * c2)
            out = nxt
        return {(new_alpha, iv): c for iv, c in out.items()}

    def _sigma_phi(self, u: WittElement, target: AlgebraParams) -> WittElement:
        terms: Dict = {}
        for (alpha, ivec, p), c in u.terms.items():
            for (a2, i2), c2 in self._sigma_monomial(alpha, ivec).items():
                for p2, c3 in self._dimg[p - 1].items():
                    _accumulate(terms, (a2, i2, p2), c * c2 * c3)
        return WittElement._raw(target, terms)

    def __call__(self, u: WittElement) -> WittElement:
        if u.params != self.source:
            raise InvariantMismatch("element does not belong to the source algebra")
        if self._pre is not None:
            u = psi_map(self.source, self._pre, u)
        v = self._sigma_phi(u, self._inner_target)
        if self._post is not None:
            v = psi_map(self._inner_target, self._post, v)
        return v

    def derivation_image(self, d: DerivationVector) -> DerivationVector:
        coeffs = [Fraction(0)] * self.target.ell
        for p in d.support():
            for p2, c in self._dimg[p - 1].items():
                coeffs[p2 - 1] += d[p] * c
        return DerivationVector(coeffs)

    def validate(self, rng, samples: int = 12) -> None:
        """Exact checks on random elements: brackets, S-membership, grading
        (when no rho-normalization is involved) and the pairing law."""
        from .sampling import random_derivation_vector, random_gamma_vector, random_s_element

        src = self.source
        elems = [random_s_element(src, rng, ngens=2, radius=1, max_level=2) for _ in range(samples)]
        checks = dict.fromkeys(("bracket", "membership", "grading", "pairing"), 0)
        for k, u in enumerate(elems):
            fu = self(u)
            if not is_in_S(fu):
                raise LiftValidationFailed(f"image of {u!r} is not divergence-free in the target")
            checks["membership"] += 1
            v = elems[(k + 1) % len(elems)]
            if self(bracket(u, v)) != bracket(fu, self(v)):
                raise LiftValidationFailed(f"bracket not preserved on {u!r}, {v!r}")
            checks["bracket"] += 1
            if self._pre is None or not any(src.rho) and not any(self.target.rho):
                for alpha, part in grade_decompose(u).items():
                    want = act_vector(self.g, alpha) if src.n else alpha
                    if set(self(part).support()) - {want}:
                        raise LiftValidationFailed(f"degree {alpha} not sent to degree {want}")
                    checks["grading"] += 1
        for _ in range(samples):
            d = random_derivation_vector(src.ell, rng)
            alpha = random_gamma_vector(src, rng)
            image = act_vector(self.g, alpha) if src.n else alpha
            if pairing(d, alpha) != pairing(self.derivation_image(d), image):
                raise LiftValidationFailed("pairing law fails")
            checks["pairing"] += 1
        self.checks = checks


def group_induced_map(params: AlgebraParams, params2: AlgebraParams, g: GroupElement, rng=None, samples: int = 12) -> InducedMap:
    """Lift g to a map S(params) -> S(params2), validated before it is returned."""
    if params.shape != params2.shape:
        raise InvariantMismatch(f"shapes {params.shape} and {params2.shape} differ")
    if (g.l2, g.l3) != (params.l2, params.l3):
        raise WitnessInvalid("group element has the wrong block sizes")
    if params.n and act_lattice(g, params.gamma) != params2.gamma:
        raise WitnessInvalid("g does not carry Gamma onto Gamma'")
    if params.l1 == 0 and params.n and act_vector(g, params.rho) != params2.rho:
        raise WitnessInvalid("g does not carry rho to rho'")
    fmap = InducedMap(params, params2, g)
    if rng is None:
        from .sampling import rng_for

        rng = rng_for(0, "lift", params.shape)
    fmap.validate(rng, samples)
    return fmap


# ---------------------------------------------------------------- characters


@dataclass(frozen=True)
class AdditiveCharacter:
    """A homomorphism Gamma -> Q given by its values on the canonical basis."""

    gamma: object
    values: tuple

    def __post_init__(self):
        vals = qq.qvec(self.values)
        if len(vals) != self.gamma.dim:
            raise InvalidHandle(f"a character on Gamma needs {self.gamma.dim} basis values")
        object.__setattr__(self, "values", vals)

    @classmethod
    def from_functional(cls, gamma, v) -> "AdditiveCharacter":
        """The character beta -> beta . v."""
        return cls(gamma, tuple(qq.dot(b, v) for b in gamma.basis))

    def functional(self) -> tuple:
        """The unique v with mu(beta) = beta . v (Gamma spans Q^n)."""
        if not self.gamma.dim:
            return ()
        return qq.mat_times_col(qq.inverse(self.gamma.basis), self.values)

    def __call__(self, beta) -> Fraction:
        coords = self.gamma.coordinates(qq.qvec(beta))
        if coords is None:
            raise NotInGamma(f"{tuple(map(qq.fmt_q, beta))} is not in Gamma")
        return qq.dot(coords, self.values)

    def __add__(self, other):
        return AdditiveCharacter(self.gamma, qq.vadd(self.values, other.values))


def character_from_derivation(params: AlgebraParams, d: DerivationVector) -> AdditiveCharacter:
    """beta -> <d, beta>."""
    return AdditiveCharacter.from_functional(params.gamma, d.coeffs[params.l1 :])


def split_character(params: AlgebraParams, mu: AdditiveCharacter) -> Tuple[DerivationVector, AdditiveCharacter]:
    """Write mu = <d3, .> + mu* with d3 in the span of the last l3 derivations
    and mu* vanishing on that span's dual coordinates."""
    v = mu.functional()
    l2 = params.l2
    d3 = DerivationVector((0,) * (params.l1 + l2) + tuple(v[l2:]))
    rest = AdditiveCharacter.from_functional(params.gamma, tuple(v[:l2]) + qq.zeros(params.l3))
    return d3, rest


# ---------------------------------------------------------------- derivations


KINDS = ("inner", "outer_w_rho0", "character", "combined")


@dataclass(frozen=True)
class DerivationHandle:
    kind: str
    params: AlgebraParams
    u: Optional[WittElement] = None
    mu: Optional[AdditiveCharacter] = None


def in_w_rho0(u: WittElement) -> bool:
    """u lies in x^rho D: every term is x^rho times a constant derivation."""
    rho, zero = u.params.rho, (0,) * u.params.m
    return all(a == rho and i == zero for (a, i, _) in u.terms)


def make_derivation(kind: str, params: AlgebraParams, u: Optional[WittElement] = None, mu=None) -> DerivationHandle:
    if kind not in KINDS:
        raise InvalidHandle(f"unknown derivation kind {kind!r}")
    if kind in ("inner", "outer_w_rho0", "combined"):
        if u is None:
            raise InvalidHandle(f"{kind} derivation needs an element u")
        if u.params != params:
            raise InvalidHandle("u belongs to a different algebra")
    if kind in ("character", "combined"):
        if mu is None:
            raise InvalidHandle(f"{kind} derivation needs a character")
        if not isinstance(mu, AdditiveCharacter):
            mu = AdditiveCharacter(params.gamma, mu)
        if mu.gamma != params.gamma:
            raise InvalidHandle("character is defined on a different lattice")
    if kind == "inner" and not is_in_S(u):
        raise InvalidHandle("inner derivation needs u in S")
    if kind == "outer_w_rho0" and not in_w_rho0(u):
        raise InvalidHandle("u must be x^rho times a constant derivation")
    if kind == "combined" and not (is_in_S(u) or in_w_rho0(u)):
        raise InvalidHandle("u must lie in S or in x^rho D")
    return DerivationHandle(kind, params, u if kind != "character" else None, mu if kind in ("character", "combined") else None)


def apply_derivation_handle(d: DerivationHandle, v: WittElement) -> WittElement:
    """[u, v] plus mu(beta) v_beta on each homogeneous part v_beta."""
    if not isinstance(d, DerivationHandle):
        raise InvalidHandle("not a derivation handle")
    out = WittElement.zero(v.params)
    if d.u is not None:
        out = out + bracket(d.u, v)
    if d.mu is not None:
        for beta, part in grade_decompose(v).items():
            out = out + part.scale(d.mu(beta))
    return out


DerivationLike = Union[DerivationHandle, Callable[[WittElement], WittElement]]


def _as_callable(d: DerivationLike):
    if isinstance(d, DerivationHandle):
        return lambda v: apply_derivation_handle(d, v)
    if callable(d):
        return d
    raise InvalidHandle("expected a derivation handle or a callable")


def leibniz_defect(d: DerivationLike, u: WittElement, v: WittElement) -> WittElement:
    """d([u,v]) - [d u, v] - [u, d v]."""
    f = _as_callable(d)
    return f(bracket(u, v)) - bracket(f(u), v) - bracket(u, f(v))


def is_derivation_on(d: DerivationLike, pairs: Sequence[Tuple[WittElement, WittElement]]) -> bool:
    """Exact Leibniz check on every pair; all elements must lie in S."""
    for u, v in pairs:
        for w in (u, v):
            if not is_in_S(w):
                raise NotInS(f"{w!r} is not in S")
    return all(not leibniz_defect(d, u, v) for u, v in pairs)


def corrupt_on_grade(d: DerivationLike, beta) -> Callable[[WittElement], WittElement]:
    """d with the sign flipped on inputs of degree beta; a control case that
    fails the Leibniz rule whenever d acts nontrivially across grades."""
    f = _as_callable(d)
    beta = qq.qvec(beta)

    def g(v):
        out = WittElement.zero(v.params)
        for alpha, part in grade_decompose(v).items():
            w = f(part)
            out = out + (-w if alpha == beta else w)
        return out

    return g


def corrupt_on_level(d: DerivationLike, level: int) -> Callable[[WittElement], WittElement]:
    """d with the sign flipped on input terms of t-level ``level``; the
    control for algebras whose grading group is trivial."""
    f = _as_callable(d)

    def g(v):
        low = {k: c for k, c in v.terms.items() if sum(k[1]) == level}
        high = {k: c for k, c in v.terms.items() if sum(k[1]) != level}
        return f(WittElement._raw(v.params, high)) - f(WittElement._raw(v.params, low))

    return g


# ---------------------------------------------------------------- probes


@dataclass(frozen=True)
class ProbeResult:
    status: str
    n: Optional[int] = None

    def __str__(self):
        return f"{self.status}({self.n})" if self.n is not None else self.status


def nilpotency_probe(u: WittElement, v: WittElement, max_n: int) -> ProbeResult:
    """First n <= max_n with (ad u)^n v = 0, else undecided."""
    if max_n < 1:
        raise ValueError("max_n must be at least 1")
    w = v
    for n in range(1, max_n + 1):
        w = bracket(u, w)
        if not w:
            return ProbeResult("nilpotent_at", n)
    return ProbeResult("undecided")


def local_finiteness_probe(u: WittElement, v: WittElement, max_n: int) -> ProbeResult:
    """If some (ad u)^n v falls in the span of the earlier iterates, that span
    is ad u-invariant and has the reported dimension; otherwise undecided."""
    ech = Echelon()
    w = v
    for _ in range(max_n + 1):
        if not ech.add(w.terms):
            return ProbeResult("finite_dim", ech.rank)
        w = bracket(u, w)
    return ProbeResult("undecided")
