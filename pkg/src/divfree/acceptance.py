"""Executable acceptance suite: one exact property check per criterion.

Every check runs on all profiles in :data:`divfree.sampling.PROFILES` with a
fixed seed and reports a single pass/fail line.
"""

from __future__ import annotations

import itertools
import time
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional

from . import qq
from .algebra import AlgebraParams, DerivationVector, d_alpha_basis, exponent_vectors, joint_kernel_check
from .classify import ISOMORPHIC, NOT_ISOMORPHIC, search_witness, verify_witness
from .errors import DivFreeError, LiftValidationFailed, RequiresL1
from .expr import format_element, parse
from .filtration import (
    admissible,
    build_with_leading_term,
    degree_key,
    leading_term,
    s_alpha_level0_basis,
)
from .lattice import GroupElement, act_lattice, act_vector
from .linalg import Echelon, subspace_within
from .morphisms import (
    AdditiveCharacter,
    apply_derivation_handle,
    corrupt_on_grade,
    corrupt_on_level,
    group_induced_map,
    is_derivation_on,
    leibniz_defect,
    make_derivation,
    psi_map,
)
from .sampling import (
    PROFILES,
    random_algebra_element,
    random_derivation_vector,
    random_gamma_vector,
    random_group_element,
    random_ivec,
    random_nonzero_s_element,
    random_rational,
    random_s_element,
    random_witt_element,
    rng_for,
)
from .witt import (
    WittElement,
    bracket,
    divergence,
    dpq,
    dpq_expanded,
    dpq_generators,
    grade_decompose,
    is_in_S,
)

CASES = 200


@dataclass
class CriterionResult:
    number: int
    name: str
    passed: bool
    detail: str
    seconds: float = 0.0

    def line(self) -> str:
        mark = "PASS" if self.passed else "FAIL"
        return f"{mark} {self.number:>2} {self.name:<32} {self.detail} [{self.seconds:.2f}s]"


class _Tally:
    def __init__(self):
        self.cases = 0
        self.failures: List[str] = []

    def check(self, ok: bool, what: str) -> None:
        self.cases += 1
        if not ok and len(self.failures) < 5:
            self.failures.append(what)
        elif not ok:
            self.failures.append("")

    def result(self, extra: str = "") -> tuple:
        bad = len(self.failures)
        msg = f"{self.cases} cases, {bad} failing"
        if extra:
            msg += f"; {extra}"
        if bad:
            msg += "; first: " + " | ".join(f for f in self.failures[:3] if f)
        return not bad, msg


def _profiles():
    return [(p.name, p.params()) for p in PROFILES]


def _pairs(ell):
    return [(p, q) for p in range(1, ell + 1) for q in range(1, ell + 1) if p != q]


# ---------------------------------------------------------------- 1-4


def crit_divergence_free(seed: int):
    t = _Tally()
    for name, params in _profiles():
        rng = rng_for(seed, 1, name)
        neg = tuple(-r for r in params.rho)
        for _ in range(CASES):
            p, q = rng.choice(_pairs(params.ell))
            u = random_algebra_element(params, rng, nterms=2, radius=3, max_level=4)
            w = dpq(p, q, u)
            t.check(not divergence(w.shift(neg)), f"{name} D_{p}{q}({u!r})")
    return t.result()


def crit_oracle_equivalence(seed: int):
    t = _Tally()
    for name, params in _profiles():
        rng = rng_for(seed, 2, name)
        for _ in range(CASES):
            p, q = rng.choice(_pairs(params.ell))
            alpha = random_gamma_vector(params, rng, 3)
            ivec = random_ivec(params.m, rng, 4)
            from .algebra import AlgebraElement

            mono = AlgebraElement._raw(params, {(alpha, ivec): qq.q(1)})
            t.check(dpq(p, q, mono) == dpq_expanded(params, p, q, alpha, ivec), f"{name} {p},{q},{alpha},{ivec}")
    return t.result()


def crit_lie_laws(seed: int):
    t = _Tally()
    for name, params in _profiles():
        rng = rng_for(seed, 3, name)
        for _ in range(CASES):
            u, v, w = (random_s_element(params, rng, ngens=1, radius=3, max_level=2) for _ in range(3))
            uv = bracket(u, v)
            t.check(uv == -bracket(v, u), f"{name} antisymmetry")
            jac = bracket(u, bracket(v, w)) + bracket(v, bracket(w, u)) + bracket(w, uv)
            t.check(not jac, f"{name} Jacobi")
            t.check(is_in_S(uv), f"{name} closure")
    return t.result()


def crit_grading(seed: int):
    t = _Tally()
    for name, params in _profiles():
        rng = rng_for(seed, 4, name)
        for _ in range(CASES):
            a, b = random_gamma_vector(params, rng, 3), random_gamma_vector(params, rng, 3)
            u = random_s_element(params, rng, ngens=2, alpha=a)
            v = random_s_element(params, rng, ngens=2, alpha=b)
            t.check(bracket(u, v).support() <= {qq.vadd(a, b)}, f"{name} {a}+{b}")
    return t.result()


# ---------------------------------------------------------------- 5-6


def _test_alphas(params: AlgebraParams):
    ball = params.gamma.ball(1)
    near_rho = [qq.vadd(params.rho, b) for b in ball]
    return sorted(set(ball) | set(near_rho))


def level0_bruteforce(params: AlgebraParams, alpha) -> List[dict]:
    """Level-zero part of the span of the generators of S_alpha with |i| <= 2."""
    gens = dpq_generators(params, alpha, 2)
    return subspace_within((g.terms for g in gens), lambda key: sum(key[1]) == 0)


def _same_span(a: List[dict], b: List[dict]) -> bool:
    e1, e2 = Echelon(), Echelon()
    for v in a:
        e1.add(v)
    for v in b:
        e2.add(v)
    return e1.rank == e2.rank and all(e1.contains(v) for v in b)


def crit_level0(seed: int):
    t = _Tally()
    special = {"empty": 0, "D3": 0}
    for name, params in _profiles():
        for alpha in _test_alphas(params):
            basis = [b.terms for b in s_alpha_level0_basis(params, alpha)]
            brute = level0_bruteforce(params, alpha)
            t.check(_same_span(basis, brute), f"{name} alpha={alpha}")
            if alpha == params.rho and params.m == 0:
                special["empty"] += 1
                t.check(not basis, f"{name} rho level zero not empty")
            if alpha == params.rho and params.m == 1:
                special["D3"] += 1
                t.check(len(basis) == params.ell - 1, f"{name} rho level zero dimension")
    return t.result(f"special alpha=rho cases: {special['empty']} empty, {special['D3']} with l1+l2=1")


def leading_term_oracle(params: AlgebraParams, alpha, ivec, d: DerivationVector) -> bool:
    """Whether the span of generators of S_alpha with |j| <= |i| + 1 has an
    element with leading term x^{alpha,i} d, decided by linear algebra."""
    gens = dpq_generators(params, alpha, sum(ivec) + 1)
    top = degree_key(ivec)
    kept = subspace_within((g.terms for g in gens), lambda key: degree_key(key[1]) <= top)
    proj = Echelon()
    for row in kept:
        proj.add({p: c for (a, i, p), c in row.items() if i == tuple(ivec)})
    return not d.is_zero() and proj.contains({p: c for p, c in enumerate(d.coeffs, start=1) if c})


def _leading_term_cases(params: AlgebraParams, rng, count: int):
    out = []
    for k in range(count):
        alpha = params.rho if k % 2 == 0 else random_gamma_vector(params, rng, 2)
        ivec = random_ivec(params.m, rng, 2)
        if k % 3 == 0:
            basis = d_alpha_basis(params, qq.vsub(alpha, params.rho))
            d = DerivationVector.zero(params.ell)
            for b in basis:
                d = d + random_rational(rng) * b
            if params.m and k % 4 == 0 and ivec:
                ivec = ivec[:-1] + (1,)
                d = d + DerivationVector.basic(params.ell, params.m)
        elif k % 3 == 1:
            d = random_derivation_vector(params.ell, rng, 1)
        else:
            d = DerivationVector.basic(params.ell, rng.randint(1, params.ell))
        out.append((alpha, ivec, d))
    return out


def crit_leading_terms(seed: int):
    t = _Tally()
    built = refused = 0
    for name, params in _profiles():
        rng = rng_for(seed, 6, name)
        for alpha, ivec, d in _leading_term_cases(params, rng, 8):
            expected = leading_term_oracle(params, alpha, ivec, d)
            t.check(admissible(params, alpha, ivec, d) == expected, f"{name} admissibility {alpha},{ivec},{d.coeffs}")
            try:
                u = build_with_leading_term(params, alpha, ivec, d)
            except DivFreeError:
                refused += 1
                t.check(not expected, f"{name} refused admissible {alpha},{ivec},{d.coeffs}")
                continue
            built += 1
            lt = leading_term(u, alpha)
            t.check(expected, f"{name} built inadmissible {alpha},{ivec}")
            t.check(lt.degree == tuple(ivec) and lt.direction == d, f"{name} wrong leading term")
            t.check(is_in_S(u) and u.support() == {qq.qvec(alpha)}, f"{name} output not in S_alpha")
    return t.result(f"{built} built, {refused} refused")


# ---------------------------------------------------------------- 7-8


def crit_twist(seed: int):
    t = _Tally()
    skipped = []
    for name, params in _profiles():
        rng = rng_for(seed, 7, name)
        if params.l1 == 0:
            try:
                psi_map(params, [], WittElement.zero(params))
                t.check(False, f"{name} twist accepted l1 = 0")
            except RequiresL1:
                skipped.append(name)
            continue
        for _ in range(100):
            rho2 = random_gamma_vector(params, rng, 3)
            shifts = [qq.vsub(rho2, params.rho)] + [qq.zeros(params.n)] * (params.l1 - 1)
            u = random_s_element(params, rng, ngens=2)
            v = random_s_element(params, rng, ngens=1)
            pu, pv = psi_map(params, shifts, u), psi_map(params, shifts, v)
            t.check(pu.params.rho == rho2 and is_in_S(pu), f"{name} image not in S(rho')")
            t.check(psi_map(params, shifts, bracket(u, v)) == bracket(pu, pv), f"{name} bracket")
    return t.result(f"l1 = 0 profiles correctly refused: {len(skipped)}")


def _find_corruption_witness(params, handle, candidates):
    """Flip the sign on the degree of the first candidate (on its t-level when
    Gamma is trivial) and search the candidate pairs for a Leibniz failure."""
    if params.n:
        bad = corrupt_on_grade(handle, sorted(candidates[0].support())[0])
    else:
        bad = corrupt_on_level(handle, min(sum(k[1]) for k in candidates[0].terms))
    for u, v in itertools.combinations(candidates, 2):
        if leibniz_defect(bad, u, v):
            return bad, (u, v)
    return bad, None


def crit_derivations(seed: int):
    t = _Tally()
    for name, params in _profiles():
        rng = rng_for(seed, 8, name)
        pairs = [
            (random_s_element(params, rng, ngens=1, max_level=1), random_s_element(params, rng, ngens=1, max_level=1))
            for _ in range(100)
        ]
        u0 = random_nonzero_s_element(params, rng, ngens=1, max_level=1)
        while not params.n and all(sum(k[1]) == 0 for k in u0.terms):
            # with trivial Gamma a constant field would make ad u0 too degenerate
            u0 = random_nonzero_s_element(params, rng, ngens=1, max_level=3)
        inner = make_derivation("inner", params, u0)
        d0 = random_derivation_vector(params.ell, rng)
        outer = make_derivation("outer_w_rho0", params, WittElement.from_parts(params, _x_rho(params), d0))
        mu = AdditiveCharacter(params.gamma, [random_rational(rng) for _ in range(params.n)])
        char = make_derivation("character", params, mu=mu)
        combined = make_derivation("combined", params, outer.u, mu)
        for label, h in (("inner", inner), ("x^rho D", outer), ("character", char), ("combined", combined)):
            t.check(is_derivation_on(h, pairs), f"{name} {label} Leibniz")
        for u, _ in pairs[:20]:
            t.check(is_in_S(apply_derivation_handle(outer, u)), f"{name} ad x^rho d leaves S")
            image = apply_derivation_handle(char, u)
            diag = WittElement.zero(params)
            for beta, part in grade_decompose(u).items():
                diag = diag + part.scale(mu(beta))
            t.check(image == diag, f"{name} character not diagonal")
        level = 1 if params.n else 2
        gens = [g for a in params.gamma.ball(1) for g in dpq_generators(params, a, level)][:30]
        bad, pair = _find_corruption_witness(params, inner, gens)
        t.check(pair is not None and not is_derivation_on(bad, [pair]), f"{name} corrupted control passed")
    return t.result("each Leibniz case covers 100 S-pairs")


def _x_rho(params):
    from .algebra import AlgebraElement

    return AlgebraElement._raw(params, {(params.rho, (0,) * params.m): qq.q(1)})


# ---------------------------------------------------------------- 9-11


def crit_decision_layer(seed: int, per_profile: int = 20):
    t = _Tally()
    lifts = failures_l2 = 0
    logged = []
    for name, params in _profiles():
        rng = rng_for(seed, 9, name)
        for _ in range(per_profile):
            g = random_group_element(params.l2, params.l3, rng)
            gamma2 = act_lattice(g, params.gamma)
            rho2 = act_vector(g, params.rho) if params.l1 == 0 and params.n else None
            params2 = AlgebraParams(params.l1, params.l2, params.l3, gamma2, rho2)
            t.check(verify_witness(params, params2, g), f"{name} drawn g fails verification")
            verdict = search_witness(params, params2, 3)
            t.check(verdict.status == ISOMORPHIC, f"{name} search: {verdict.status}")
            if verdict.status != ISOMORPHIC:
                continue
            t.check(verify_witness(params, params2, verdict.witness), f"{name} witness does not re-verify")
            t.check(verify_witness(params2, params, verdict.witness.inverse()), f"{name} inverse witness")
            try:
                group_induced_map(params, params2, verdict.witness, rng, samples=3)
                lifts += 1
            except LiftValidationFailed as exc:
                if params.l2 == 0:
                    t.check(False, f"{name} lift failed with l2 = 0: {exc}")
                else:
                    failures_l2 += 1
                    logged.append(f"{name}: {exc}")
        if params.l1 == 0 and params.n:
            zero = params.with_rho(None)
            nonzero = params.with_rho(params.gamma.basis[-1])
            for a, b in ((zero, nonzero), (nonzero, zero)):
                t.check(search_witness(a, b, 3).status == NOT_ISOMORPHIC, f"{name} rho-origin")
        other = AlgebraParams.make(*_other_shape(params.shape))
        t.check(search_witness(params, other, 1).status == NOT_ISOMORPHIC, f"{name} shape mismatch")
    extra = f"{lifts} lifts validated, {failures_l2} lift failures with l2 > 0"
    if logged:
        extra += " (" + "; ".join(logged[:3]) + ")"
    return t.result(extra)


def _other_shape(shape):
    l1, l2, l3 = shape
    return (l1, l2, l3 + 1) if l1 else (l1 + 1, l2, l3)


def crit_joint_kernel(seed: int):
    t = _Tally()
    for name, params in _profiles():
        t.check(joint_kernel_check(params, 3, params.gamma.ball(1)), name)
    return t.result()


def crit_interface(seed: int, run_cli: bool = True):
    t = _Tally()
    per = -(-500 // len(PROFILES))
    for name, params in _profiles():
        rng = rng_for(seed, 11, name)
        for k in range(per):
            if k % 2:
                u = random_witt_element(params, rng, nterms=rng.randint(0, 4))
            else:
                u = random_algebra_element(params, rng, nterms=rng.randint(0, 4))
            text = format_element(u)
            back = parse(text, params)
            t.check(back == u or (not u and not back), f"{name} round trip {text!r}")
            t.check(format_element(back) == text, f"{name} printer not canonical")
    extra = ""
    if run_cli:
        import contextlib
        import io

        from .cli import main

        buf = io.StringIO()
        with contextlib.redirect_stdout(buf):
            code = main(["selftest", "--criteria", "1-10", "--seed", str(seed)])
        t.check(code == 0, f"selftest exit code {code}")
        extra = f"selftest exit {code}"
    return t.result(extra)


CRITERIA: Dict[int, tuple] = {
    1: ("divergence-free generators", crit_divergence_free),
    2: ("closed form of the generators", crit_oracle_equivalence),
    3: ("Lie laws and closure", crit_lie_laws),
    4: ("grading", crit_grading),
    5: ("level-zero basis", crit_level0),
    6: ("prescribed leading terms", crit_leading_terms),
    7: ("rho-moving twist", crit_twist),
    8: ("derivation laws", crit_derivations),
    9: ("isomorphism decision layer", crit_decision_layer),
    10: ("joint kernel of derivations", crit_joint_kernel),
    11: ("parser round trip and selftest", crit_interface),
}


def parse_selection(text: Optional[str]) -> List[int]:
    if not text:
        return sorted(CRITERIA)
    out = set()
    for part in text.split(","):
        if "-" in part:
            lo, hi = part.split("-")
            out.update(range(int(lo), int(hi) + 1))
        else:
            out.add(int(part))
    unknown = out - set(CRITERIA)
    if unknown:
        raise DivFreeError(f"no such criteria: {sorted(unknown)}")
    return sorted(out)


def run_acceptance(seed: int = 0, criteria=None, report: Optional[Callable[[str], None]] = print) -> List[CriterionResult]:
    results = []
    for number in criteria or sorted(CRITERIA):
        name, fn = CRITERIA[number]
        start = time.perf_counter()
        try:
            ok, detail = fn(seed)
        except Exception as exc:  # a crash is a failure of that criterion, not of the runner
            ok, detail = False, f"raised {type(exc).__name__}: {exc}"
        res = CriterionResult(number, name, ok, detail, time.perf_counter() - start)
        results.append(res)
        if report:
            report(res.line())
    return results
