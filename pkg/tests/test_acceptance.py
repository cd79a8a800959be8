"""Acceptance criteria, each at its stated tolerance and time limit.

Every test records one PASS/FAIL line; the lines are printed in the
"acceptance criteria" section of the pytest summary (and directly with -s).
"""

import itertools
import math
import time

import numpy as np
import pytest

from entgauge.decompositions import (
    antisymmetric_coefficient_matrix,
    schmidt_decompose,
    slater_decompose,
    slater_rank,
)
from entgauge.norm import (
    Budget,
    Status,
    VSetSpec,
    check_compatibility,
    check_contraction,
    certified_norm_upper,
    fermionic_coupling,
    q_bracket,
    q_pure_closed_form,
    random_member,
    verdict,
    verify_decomposition,
)
from entgauge.state_io import generate, xi_k_vector
from entgauge.tensor_core import (
    PureState,
    project_vector,
    random_unit_vector,
    wedge,
    wedge_gram_inner,
)

from conftest import ACCEPTANCE


class Report:
    def __init__(self, number, title, limit):
        self.number, self.title, self.limit = number, title, limit
        self.failures = []
        self.started = time.perf_counter()

    def check(self, ok, what):
        if not ok:
            self.failures.append(what)

    def finish(self):
        elapsed = time.perf_counter() - self.started
        self.check(elapsed < self.limit, f"runtime {elapsed:.1f}s exceeds {self.limit}s")
        status = "PASS" if not self.failures else "FAIL"
        line = f"criterion {self.number} {status}: {self.title} ({elapsed:.1f}s)"
        if self.failures:
            line += " -- " + "; ".join(self.failures)
        ACCEPTANCE.append(line)
        print(line)
        assert not self.failures, line


def test_criterion_1_singlet():
    r = Report(1, "singlet closed forms and verdicts", 1.0)
    s = generate("singlet")
    r.check(abs(q_pure_closed_form(s, family="tensor") - 2) <= 1e-9, "q^⊗ != 2")
    r.check(abs(q_pure_closed_form(s, family="wedge") - 1) <= 1e-9, "q^∧ != 1")
    vt = verdict(s, VSetSpec(2, 2, "tensor"))
    vw = verdict(s, VSetSpec(2, 2, "wedge"))
    r.check(vt.status is Status.ENTANGLED and vt.label == "entangled", f"tensor verdict {vt.label}")
    r.check(vw.status is Status.SEPARABLE and vw.label == "fermionic-separable",
            f"wedge verdict {vw.label}")
    r.finish()


def test_criterion_2_c3_wedge_c3():
    r = Report(2, "100 Haar-random states in C3∧C3", 10.0)
    rng = np.random.default_rng(2)
    for i in range(100):
        s = generate("haar_pure", {"n": 3, "k": 2, "sector": "fermionic"}, rng)
        a = antisymmetric_coefficient_matrix(s)
        # the kernel vector u of A gives A†A = 1 - uu†/|u|²
        u = np.array([a[1, 2], -a[0, 2], a[0, 1]])
        u = u / np.linalg.norm(u)
        target = np.eye(3) - np.outer(u, u.conj())
        r.check(slater_rank(s) == 1, f"state {i}: Slater rank != 1")
        r.check(np.max(np.abs(a.conj().T @ a - target)) <= 1e-9, f"state {i}: A†A")
        r.check(abs(q_pure_closed_form(s, family="tensor") - 2) <= 1e-8, f"state {i}: q^⊗")
        r.check(abs(q_pure_closed_form(s, family="wedge") - 1) <= 1e-8, f"state {i}: q^∧")
    r.finish()


def test_criterion_3_tracial_state():
    r = Report(3, "tracial state n=3 k=2", 60.0)
    budget = Budget()
    phi = generate("tracial_wedge", {"n": 3, "k": 2})
    wspec, tspec = VSetSpec(2, 3, "wedge"), VSetSpec(2, 3, "tensor")
    wb = q_bracket(phi, wspec, budget)
    r.check(verify_decomposition(wb.decomposition, phi, wspec), "wedge certificate invalid")
    r.check(abs(wb.upper - 1) <= budget.lp_residual, f"q^∧ upper {wb.upper!r}")
    r.check(wb.lower >= 1 - 1e-6, f"q^∧ lower {wb.lower!r}")
    r.check(certified_norm_upper(wb.witness.operator, wspec) <= 1 + 1e-8, "witness norm > 1")
    tb = q_bracket(phi, tspec, budget)
    r.check(tb.contains(2.0), f"q^⊗ bracket [{tb.lower}, {tb.upper}] misses 2")
    r.check(tb.width <= 0.05, f"q^⊗ width {tb.width}")
    r.finish()


def test_criterion_4_fermionic_coupling():
    r = Report(4, "q^⊗ = k! q^∧ on 50 pure and 10 mixed fermionic states", 300.0)
    rng = np.random.default_rng(4)
    for i in range(50):
        n = (4, 5, 6)[i % 3]
        s = generate("haar_pure", {"n": n, "k": 2, "sector": "fermionic"}, rng)
        gap = abs(q_pure_closed_form(s, family="tensor") - 2 * q_pure_closed_form(s, family="wedge"))
        r.check(gap <= 1e-9, f"pure state {i}: gap {gap:.3g}")
    budget = Budget()
    for j in range(10):
        phi = generate("mixed_sector", {"n": 4, "k": 2, "rank": 1 + j % 4}, rng)
        try:
            c = fermionic_coupling(phi, budget)
        except AssertionError as exc:
            r.check(False, f"mixed state {j}: {exc}")
            continue
        lo, hi = c.tightened
        slo, shi = c.scaled
        r.check(max(slo, c.wedge.lower) <= min(shi, c.wedge.upper) + 1e-9,
                f"mixed state {j}: empty intersection")
        r.check(lo <= hi, f"mixed state {j}: tightened bracket empty")
    r.finish()


@pytest.mark.parametrize("l", [2, 3])
def test_criterion_5_rank_l_tight_cases(l):
    r = Report(5, f"rank-{l} tight cases, n={2 * l}", 300.0)
    n = 2 * l
    budget = Budget()
    right = PureState(2, n, xi_k_vector(l // 2, n))
    left = PureState(2, n, xi_k_vector(l, n))
    tspec, wspec = VSetSpec(2, n, "tensor", l), VSetSpec(2, n, "wedge", l)
    for spec in (tspec, wspec):
        b = q_bracket(right, spec, budget)
        r.check(b.contains(1.0), f"ξ_{l // 2} {spec.family}: [{b.lower}, {b.upper}] misses 1")
        r.check(b.width <= 1e-4, f"ξ_{l // 2} {spec.family}: width {b.width}")
    # the witness t_{√2 ξ_l}: sampled sup over V_l stays at most 1
    w = math.sqrt(2) * xi_k_vector(l, n)
    rng = np.random.default_rng([5, l])
    sampled = max(abs(np.vdot(w, random_member(tspec, rng))) ** 2 for _ in range(10_000))
    r.check(sampled <= 1 + 1e-12, f"sampled ||t_√2ξ||_K_l = {sampled}")
    witness_value = abs(np.vdot(w, left.amplitudes)) ** 2
    r.check(witness_value >= 2 - 1e-6, f"witness value {witness_value}")
    tb = q_bracket(left, tspec, budget)
    r.check(tb.lower >= 2 - 1e-6, f"ξ_{l} tensor lower {tb.lower}")
    r.check(tb.upper <= 2 + 0.05, f"ξ_{l} tensor upper {tb.upper}")
    wb = q_bracket(left, wspec, budget)
    r.check(wb.contains(1.0, tol=1e-6), f"ξ_{l} wedge [{wb.lower}, {wb.upper}] misses 1")
    r.finish()


def test_criterion_6_property_suites():
    r = Report(6, "property suites", 600.0)
    rng = np.random.default_rng(6)
    # wedge norm bound, with equality on orthogonal tuples
    for i in range(200):
        k, n = (2, 3)[i % 2], (3, 4, 5)[i % 3]
        vs = [random_unit_vector(n, rng) * rng.uniform(0.2, 2) for _ in range(k)]
        prod = math.prod(np.linalg.norm(v) for v in vs)
        r.check(np.linalg.norm(wedge(vs)) <= prod + 1e-10, f"wedge bound, tuple {i}")
        q, _ = np.linalg.qr(np.column_stack(vs))
        orth = [q[:, j] * np.linalg.norm(vs[j]) for j in range(k)]
        r.check(abs(np.linalg.norm(wedge(orth)) - prod) <= 1e-10, f"wedge equality, tuple {i}")
    # Gram determinant identity and projector algebra
    for i in range(50):
        k, n = (2, 3)[i % 2], 4
        xs = [random_unit_vector(n, rng) for _ in range(k)]
        ys = [random_unit_vector(n, rng) for _ in range(k)]
        r.check(abs(wedge_gram_inner(xs, ys) - np.vdot(wedge(ys), wedge(xs))) <= 1e-10,
                f"Gram identity {i}")
        x = random_unit_vector(n**k, rng)
        for sector in ("bosonic", "fermionic"):
            px = project_vector(x, k, n, sector)
            r.check(np.linalg.norm(project_vector(px, k, n, sector) - px) <= 1e-12,
                    f"idempotence {i} {sector}")
        r.check(abs(np.vdot(project_vector(x, k, n, "bosonic"),
                            project_vector(x, k, n, "fermionic"))) <= 1e-12, f"orthogonality {i}")
    # μ values
    for spec, sector, mu in ((VSetSpec(2, 3), "bosonic", 1.0),
                             (VSetSpec(2, 3), "fermionic", math.sqrt(2)),
                             (VSetSpec(3, 3), "fermionic", math.sqrt(6)),
                             (VSetSpec(2, 4, "tensor", 2), "fermionic", 1.0)):
        rep = check_compatibility(spec, sector, samples=100)
        r.check(abs(rep.mu - mu) <= 1e-8 and abs(rep.mu_certified - mu) <= 1e-8,
                f"μ for {sector} {spec.label()}: {rep.mu}, certified {rep.mu_certified}")
        r.check(rep.compatible == (sector == "fermionic"), f"compatibility {spec.label()}")
    # contraction over 50 random operators per sector
    for sector in ("bosonic", "fermionic"):
        rep = check_contraction(VSetSpec(2, 3), sector, trials=50)
        r.check(rep.violations == 0, f"{rep.violations} contraction violations ({sector})")
    # Schmidt/Slater round-trips and coefficient uniqueness under local unitaries
    for i in range(50):
        n = (3, 4, 5)[i % 3]
        s = PureState.from_vector(random_unit_vector(n * n, rng), 2, n)
        sf = schmidt_decompose(s)
        r.check(np.linalg.norm(sf.reconstruct() - s.amplitudes) <= 1e-10, f"Schmidt round-trip {i}")
        u = np.linalg.qr(rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n)))[0]
        v = np.linalg.qr(rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n)))[0]
        moved = PureState(2, n, np.kron(u, v) @ s.amplitudes)
        r.check(np.allclose(schmidt_decompose(moved).coefficients, sf.coefficients, atol=1e-10),
                f"Schmidt uniqueness {i}")
        a = PureState.from_vector(project_vector(random_unit_vector(n * n, rng), 2, n, "fermionic"),
                                  2, n, normalize=True)
        lf = slater_decompose(a)
        r.check(np.linalg.norm(lf.reconstruct() - a.amplitudes) <= 1e-10, f"Slater round-trip {i}")
        moved = PureState(2, n, np.kron(u, u) @ a.amplitudes)
        r.check(np.allclose(slater_decompose(moved).coefficients, lf.coefficients, atol=1e-10),
                f"Slater uniqueness {i}")
    # bracket consistency on a mix of states and families
    cheap = Budget(cg_rounds=20, multistarts=8)
    cases = [(generate("singlet"), VSetSpec(2, 2)), (generate("singlet"), VSetSpec(2, 2, "wedge")),
             (generate("product_mixture", {"n": 2}, 6), VSetSpec(2, 2)),
             (generate("tracial_wedge", {"n": 3, "k": 2}), VSetSpec(2, 3)),
             (generate("mixed_sector", {"n": 3, "k": 2, "sector": "bosonic", "rank": 2}, 6),
              VSetSpec(2, 3, "vee")),
             (generate("mixed_sector", {"n": 3, "k": 3}, 6), VSetSpec(3, 3, "wedge"))]
    for phi, spec in cases:
        b = q_bracket(phi, spec, cheap)
        r.check(b.lower <= b.upper + 1e-9, f"bracket order {spec.label()}: {b}")
    r.finish()


def test_criterion_7_oracle_equivalence():
    r = Report(7, "generic bracket vs closed form on 20 states, n=2", 600.0)
    rng = np.random.default_rng(7)
    spec = VSetSpec(2, 2)
    worst = 0.0
    for i in range(20):
        s = generate("haar_pure", {"n": 2, "k": 2}, rng)
        exact = q_pure_closed_form(s)
        b = q_bracket(s, spec, canonical_seeds=False)
        err = max(abs(b.lower - exact), abs(b.upper - exact))
        worst = max(worst, err)
        r.check(b.lower <= exact + 1e-8 <= b.upper + 2e-8, f"state {i}: bracket misses oracle")
        r.check(err <= 0.02, f"state {i}: error {err:.3g}")
    print(f"worst deviation from the closed form: {worst:.3g}")
    r.finish()
