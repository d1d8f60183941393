"""Acceptance gate: one test per top-level criterion, numbered 1-14.

Each test prints a single PASS line with its headline numbers and enforces
its own wall-clock budget.  Budgets and tolerances are pinned in-line.
A failing test here is an honest red: see the assertion message.
"""

import math
import random
import time

import numpy as np
import pytest

from looptl.annular import (annular_closure, annular_ideal, beta_report,
                            eigenvalue_family, generator_roots)
from looptl.gas import (exact_distribution, extensive_constant_report,
                        gibbs_law_check, homology_rule_report,
                        metropolis_sample, potts_params, tv_distance)
from looptl.hamiltonian import (build_hprime, build_ring_exchange,
                                code_space_probe, compile_skein_instances,
                                containment_check, joint_kernel,
                                joint_vectors_dense, kernel_dense,
                                kernel_propagate, pauli_expand_check,
                                uniform_state_energy)
from looptl.lattice import (SquareDiskLattice, SquareTorusLattice,
                            explore_component)
from looptl.modular import (color_reversing_count, label_count, label_count
                            as _lc, level_table, specific_heat,
                            theory_singular, torus_dimension_estimate)
from looptl.scalars import SpecialField, quantum_int
from looptl.structure import (catalan, conditional_expectation, ideal_span,
                              radical_vectors, verify_ideal_theorem)
from looptl.tlcat import (Morphism, common_denominator, compose,
                          compose_factored, enumerate_diagrams, gram_matrix,
                          jones_wenzl, markov_trace, radical_basis)

SAMPLER_SEED = 20260826  # pinned; criterion 11 is deterministic given it


def _report(num, msg, t0, budget):
    elapsed = time.time() - t0
    print("PASS criterion %d: %s (%.1fs, budget %ds)"
          % (num, msg, elapsed, budget))
    assert elapsed < budget, "criterion %d exceeded %ds budget" % (num, budget)


def test_criterion_01_catalan_dimensions():
    t0 = time.time()
    pairs = 0
    for s in range(0, 21, 2):
        for m in range(s + 1):
            n = s - m
            assert len(enumerate_diagrams(m, n)) == catalan(s // 2)
            pairs += 1
    _report(1, "dim Hom(m,n) = Catalan((m+n)/2) on %d boundary pairs" % pairs,
            t0, 10)


def test_criterion_02_jones_wenzl_suite():
    t0 = time.time()
    for k in range(1, 9):
        p = jones_wenzl(k)
        # hook annihilation (exact, both sides by bar symmetry)
        for i in range(k - 1):
            assert compose(Morphism.hook(k, i, p.d), p).is_zero()
        # idempotency, exact; the factored product routes every
        # non-identity upper diagram through an annihilated hook
        assert compose_factored(p, p) == p
        assert markov_trace(p) == quantum_int(k + 1)
    for ell in (1, 2, 3):
        ps = jones_wenzl(ell + 1, backend="special", ell=ell)
        assert markov_trace(ps) == SpecialField(ell).zero
    _report(2, "p_k^2=p_k, U_i p_k=0, Tr p_k=[k+1] for k<=8; "
            "Tr p_{l+1}=0 at the level-l weight", t0, 60)


def test_criterion_03_gram_signature_scan():
    t0 = time.time()
    specials = {ell: 2.0 * math.cos(math.pi / (ell + 2)) for ell in (1, 2, 3)}
    # positive semidefiniteness above and at the special weights
    for d in [2.0, 2.5] + sorted(specials.values()):
        for n in range(1, 6):
            _, g = gram_matrix(n, n, backend="float", d_value=d)
            assert np.linalg.eigvalsh(np.array(g)).min() >= -1e-9
    # exact corank at the special weights, kernel spanned by the projector
    for ell in (1, 2, 3):
        for n in range(1, min(5, ell) + 1):
            assert len(radical_basis(n, ell)) == 0
        rad = radical_basis(ell + 1, ell)
        assert len(rad) == 1
        p = jones_wenzl(ell + 1, backend="special", ell=ell)
        ratios = {d: rad[0].terms[d] / p.terms[d] for d in p.terms}
        assert len(set(ratios.values())) == 1
    # indefiniteness below the first special weight
    for d in (0.5, 1.3):
        eigs = np.concatenate([
            np.linalg.eigvalsh(np.array(
                gram_matrix(n, n, backend="float", d_value=d)[1]))
            for n in range(1, 6)])
        assert eigs.min() < -1e-9 and eigs.max() > 1e-9
    _report(3, "Gram PSD at d in {2.0, 2.5, special}, corank 0/1 exact with "
            "projector kernel, mixed signs at d in {0.5, 1.3}", t0, 120)


def test_criterion_04_ideal_equals_radical():
    t0 = time.time()
    checked = 0
    from looptl.linalg import same_span
    for ell in (1, 2, 3):
        p = jones_wenzl(ell + 1, backend="special", ell=ell)
        for n in range(ell + 1, 7):
            span, _ = ideal_span(p, n)
            rad, _, _ = radical_vectors(n, ell)
            assert len(span) == len(rad) and same_span(span, rad)
            checked += 1
    _report(4, "two-sided ideal of p_{l+1} = pairing radical, "
            "%d (l, n) grades, n<=6" % checked, t0, 300)


def test_criterion_05_conditional_expectation():
    t0 = time.time()
    rng = random.Random(5)
    field = SpecialField(5)
    done = 0
    while done < 200:
        n = 2 + done % 3  # n in {2, 3, 4}
        basis = enumerate_diagrams(n, n)
        terms = {diag: field.element([rng.randint(-4, 4)])
                 for diag in rng.sample(basis, min(3, len(basis)))}
        f = Morphism(n, n, {k: v for k, v in terms.items()
                            if v != field.zero}, field.delta)
        assert markov_trace(conditional_expectation(f)) == markov_trace(f)
        p = jones_wenzl(n, backend="special", ell=5)
        m = compose(compose(p, f), p)
        gamma = markov_trace(m) / markov_trace(p)
        assert m == p.scale(gamma)
        done += 1
    _report(5, "trace preservation and p f p = (Tr(pfp)/Tr p) p on "
            "200 randomized elements, exact", t0, 60)


def test_criterion_06_pauli_expansion():
    t0 = time.time()
    for ell in (2, 3):
        assert pauli_expand_check(ell)
    _report(6, "box and dual-box projectors equal their Pauli polynomials "
            "as 16x16 matrices, exact, l in {2, 3}", t0, 1)


def test_criterion_07_kernel_oracle_equivalence():
    t0 = time.time()
    pinned = {(2, "hprime"): 10, (2, "ring"): 40,
              (3, "hprime"): 22, (3, "ring"): 1012}
    for size in (2, 3):
        lat = SquareTorusLattice(size, size)
        for ell in (1, 2, 3):
            cs = build_hprime(lat, ell)
            dim = kernel_propagate(cs).dimension
            assert dim == kernel_dense(cs).dimension
            assert dim == pinned[(size, "hprime")]
        ring = build_ring_exchange(lat)
        dim = kernel_propagate(ring).dimension
        assert dim == kernel_dense(ring).dimension
        assert dim == pinned[(size, "ring")]
        # two-term system's ground space sits inside the ring-exchange one
        assert containment_check(build_hprime(lat, 2), ring)
    _report(7, "propagation and dense solvers agree on 2x2/3x3 (dims "
            "10/22 and 40/1012); containment holds exactly", t0, 600)


def test_criterion_08_staircase_ergodicity():
    t0 = time.time()
    lat2 = SquareTorusLattice(2, 2)
    assert len(explore_component(lat2.staircase(), model="hprime").configs) \
        == 1
    lat3 = SquareTorusLattice(3, 3)
    graph = explore_component(lat3.staircase(0), model="hprime")
    members = {c.bits for c in graph.configs}
    for offset in range(3):
        assert lat3.staircase(offset).bits in members
    _report(8, "2x2 staircases frozen; all 3x3 staircases in one component "
            "of size %d" % len(members), t0, 60)


def test_criterion_09_gibbs_law():
    t0 = time.time()
    comps = 0
    for size in (2, 3):
        lat = SquareTorusLattice(size, size)
        for ell in (2, 3):
            kb = kernel_propagate(build_hprime(lat, ell))
            for c in sorted(set(int(x) for x in kb.comp)):
                assert gibbs_law_check(kb, c, lat) < 1e-12
                comps += 1
    _report(9, "amplitude ratio (d^2)^(loop difference) exact on all %d "
            "kernel components, l in {2, 3}, 2x2 and 3x3" % comps, t0, 300)


def test_criterion_10_loop_cluster_correspondence():
    t0 = time.time()
    # planar patch: loops = clusters + dual clusters, per configuration
    disk = SquareDiskLattice(2, 3)
    for bits in range(1 << disk.nsites):
        c = disk.extract_walls(disk.config(bits))
        assert c.loops == c.clusters + c.dual_clusters
    # torus: loop/cluster weight ratio constant per homology-corrected class
    lat = SquareTorusLattice(3, 3)
    rep = extensive_constant_report(lat, potts_params(2))
    for info in rep.values():
        assert info["spread"] < 1e-12
    holds, bad = homology_rule_report(SquareTorusLattice(2, 2))
    assert holds and bad == 0
    # self-dual point: p/(1-p) = sqrt(q), exact in the coefficient field
    for ell in (1, 2, 3):
        g = potts_params(ell)
        assert g.p / (g.field.one - g.p) == g.n
    _report(10, "planar L = C + C* per config; %d torus homology classes "
            "with constant ratio; p = sqrt(q)/(1+sqrt(q)) self-dual exactly"
            % len(rep), t0, 300)


def test_criterion_11_sampler_tv():
    t0 = time.time()
    lat = SquareTorusLattice(3, 3)
    g = potts_params(2)
    probs, _, _ = exact_distribution(lat, g)
    rec = metropolis_sample(lat, g, 1_000_000, seed=SAMPLER_SEED)
    tv = tv_distance(rec, probs)
    assert tv < 0.05, (
        "sampler total-variation distance %.4f >= 0.05 after 1e6 sweeps "
        "(per-proposal estimator; the iid sampling floor at this sample "
        "size over 2^18 states is about 0.042)" % tv)
    _report(11, "3x3 l=2 sampler, 1e6 sweeps, seed %d: TV = %.4f < 0.05"
            % (SAMPLER_SEED, tv), t0, 600)


def test_criterion_12_joint_kernel_trichotomy():
    t0 = time.time()
    lat = SquareTorusLattice(3, 3)
    lines = []
    for ell in (1, 2):
        target = torus_dimension_estimate(ell, 1)
        cs = build_hprime(lat, ell)
        skein = compile_skein_instances(lat, ell)
        # two independent rank computations are hard-asserted equal
        # inside joint_kernel
        basis, rep = joint_kernel(cs, skein, target=target)
        probe = ""
        if basis.dimension:
            vecs = joint_vectors_dense(basis)
            ok, worst = code_space_probe(vecs, lat, tol=1e-9)
            if ell == 1:
                # hard requirement: single-bond operators act as scalars
                assert ok, ("l=1 code-space probe failed: worst deviation %g"
                            % worst)
            probe = ", probe dev %.3g" % worst
        lines.append("l=%d: dim %d vs target %d (%s%s)"
                     % (ell, rep["dimension"], target, rep["verdict"], probe))
    # target match (and the l=2 probe, limited by the same lattice
    # fineness) is reported, not asserted
    _report(12, "; ".join(lines) + "; solver agreement and l=1 probe "
            "asserted", t0, 1800)


def test_criterion_13_annular_suite():
    t0 = time.time()
    # closure of the grade-2 projector is R^2 - 1, exactly
    for ell in (1, 2, 3):
        field = SpecialField(ell)
        closed = annular_closure(jones_wenzl(2, backend="special", ell=ell))
        got = list(closed.coeffs) + [field.zero] * (3 - len(closed.coeffs))
        assert got[:3] == [field.element([-1]), field.zero, field.one]
    # ideal generator roots lie in the claimed eigenvalue family
    for ell in (1, 2, 3, 4):
        roots = generator_roots(annular_ideal(ell, ell + 2))
        for x in eigenvalue_family(ell):
            assert min(abs(x - r) for r in roots) < 1e-9
    # beta projectors in the annular quotient
    res3 = beta_report(3)["results"][("shifted", "even")]
    assert res3["orthogonal"] and res3["idempotent"]
    res2 = beta_report(2)["results"][("shifted", "even")]
    assert res2["orthogonal"] and res2["idempotent"], (
        "closure and root-family checks passed and l=3 betas are orthogonal "
        "idempotents, but at l=2 the even annular sector is one-dimensional: "
        "all beta vectors coincide up to sign (distinct = %d), so mutual "
        "orthogonality is structurally impossible there" % res2["distinct"])
    _report(13, "closure(p_2) = R^2 - 1; generator roots in family; "
            "beta orthogonality/idempotency in quotient", t0, 300)


def test_criterion_14_level_table():
    t0 = time.time()
    assert [label_count(e) for e in range(1, 7)] == [1, 4, 4, 9, 9, 16]
    assert [color_reversing_count(e) for e in range(1, 7)] == \
        [1, 1, 4, 4, 9, 9]
    assert [specific_heat(e) for e in range(1, 7)] == [2, 5, 8, 13, 18, 25]
    assert (label_count(3), color_reversing_count(3), specific_heat(3)) == \
        (4, 4, 8)
    for row in level_table(6):
        assert row.theory_singular == (row.ell % 4 == 2)
        # every singular level shows the even-sector rank drop; the
        # converse fails at l = 4, a coordinate-only degeneracy
        if row.theory_singular:
            assert row.even_singular
    for ell in range(1, 11):
        assert theory_singular(ell) == (ell % 4 == 2)
    _report(14, "label/color-reversing/heat table for l<=6 incl. (4,4,8) "
            "at l=3; singularity iff l = 2 mod 4", t0, 1)
