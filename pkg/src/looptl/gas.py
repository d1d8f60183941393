"""Statistical layer: measurement distributions of ground vectors, the
loop-count Gibbs law, the random-cluster correspondence, and a
single-bond-flip Metropolis sampler with an exact-enumeration oracle.

The wall weight of a spin configuration can be read two ways:
    loop form      (d^2)^L
    cluster form   q^C * p^E * (1-p)^{E*}
with q = d^4 and p = sqrt(q)/(1+sqrt(q)).  In the plane the two agree
up to one extensive constant; on the torus the correction for wrapping
clusters is established empirically by the enumeration oracle and
emitted in reports, never silently absorbed.
"""

from __future__ import annotations

import math
from fractions import Fraction

import numpy as np

from .errors import ConfigInvalid, StateSpaceTooLarge
from .scalars import SpecialField

ENUM_STATE_CAP = 1 << 20
RECOUNT_EVERY = 1000


class GibbsModel:
    """Exact parameter bundle of the self-dual random-cluster measure
    matching the loop gas at level ell: d the loop weight, n = d^2,
    q = d^4, p = sqrt(q)/(1+sqrt(q))."""

    def __init__(self, ell):
        if ell < 1:
            raise ConfigInvalid("level must be >= 1")
        self.ell = ell
        self.field = SpecialField(ell)
        d = self.field.delta
        self.d = d
        self.n = d * d
        self.q = d * d * d * d
        # sqrt(q) = d^2 exactly, so p stays inside the field
        self.p = self.n / (self.field.one + self.n)
        self.d_float = float(d)
        self.q_float = float(self.q)
        self.p_float = float(self.p)

    @property
    def flags(self):
        """Notes a report should carry verbatim."""
        out = []
        if self.ell == 3:
            out.append(
                "level-3 cluster weight is exactly (7+3*sqrt(5))/2 ~= "
                "%.4f; the often-quoted 5.6 does not match q = d**4"
                % self.q_float)
        return out

    def __repr__(self):
        return "GibbsModel(ell=%d, q=%.6g, p=%.6g)" % (
            self.ell, self.q_float, self.p_float)


def potts_params(ell):
    return GibbsModel(ell)


def measurement_distribution(basis, component):
    """Born distribution of one kernel basis vector over its states.

    Probabilities are (d^2)**(relative loop count), normalized; exact
    d-exponents come straight from the basis.  Returns a dict mapping
    state index to float probability.
    """
    states = basis.component_states(component)
    expo = basis.pot[states].astype(float)
    expo -= expo.min()
    w = basis.d ** (2.0 * expo)
    w /= w.sum()
    return dict(zip(states.tolist(), w.tolist()))


def fk_weight(config, model):
    """Both readings of the wall weight of one spin configuration.

    Returns (loop_form, cluster_form, census) with loop_form =
    (d^2)^L over all loops and cluster_form = q^C p^E (1-p)^{E*}.
    """
    census = config.lattice.extract_walls(config)
    loop_form = model.d_float ** (2 * census.loops)
    cluster_form = (model.q_float ** census.clusters
                    * model.p_float ** census.plus_edges
                    * (1 - model.p_float) ** census.minus_edges)
    return loop_form, cluster_form, census


def cluster_weight_exact(census, model):
    """Cluster-form weight as an exact field element."""
    one = model.field.one
    w = one
    for _ in range(census.clusters):
        w = w * model.q
    for _ in range(census.plus_edges):
        w = w * model.p
    for _ in range(census.minus_edges):
        w = w * (one - model.p)
    return w


def exact_distribution(lat, model, keep_censuses=False):
    """Exhaustive cluster-form distribution over all configurations.

    Returns (probabilities array indexed by state bits, weights array,
    censuses list or None).  Without censuses only the cluster count
    is needed per state, which keeps the full 2^18 enumeration fast.
    """
    n = 1 << lat.nsites
    if n > ENUM_STATE_CAP:
        raise StateSpaceTooLarge("enumeration capped at %d states"
                                 % ENUM_STATE_CAP)
    nb = lat.nsites
    weights = np.empty(n)
    censuses = [] if keep_censuses else None
    if keep_censuses:
        for bits in range(n):
            _, w, census = fk_weight(lat.config(bits), model)
            weights[bits] = w
            censuses.append(census)
    else:
        q, p = model.q_float, model.p_float
        nv = lat.w * lat.h
        ends = [_bond_ends(lat, bond) for bond in range(nb)]
        for bits in range(n):
            parent = list(range(nv))

            def find(x):
                while parent[x] != x:
                    parent[x] = parent[parent[x]]
                    x = parent[x]
                return x

            comps = nv
            e = 0
            for bond in range(nb):
                if (bits >> bond) & 1:
                    e += 1
                    ra, rb = find(ends[bond][0]), find(ends[bond][1])
                    if ra != rb:
                        parent[ra] = rb
                        comps -= 1
            weights[bits] = (q ** comps) * (p ** e) * ((1 - p) ** (nb - e))
    probs = weights / weights.sum()
    return probs, weights, censuses


def extensive_constant_report(lat, model):
    """Loop-form / cluster-form ratio across all configurations,
    grouped by the number of wrapping clusters and wrapping dual
    clusters; in the plane (and in the non-wrapping torus sector) the
    ratio is one fixed constant."""
    n = 1 << lat.nsites
    if n > ENUM_STATE_CAP:
        raise StateSpaceTooLarge("enumeration capped at %d states"
                                 % ENUM_STATE_CAP)
    groups = {}
    for bits in range(n):
        loop_form, cluster_form, census = fk_weight(lat.config(bits), model)
        key = (census.wrapping_clusters, census.wrapping_dual_clusters)
        groups.setdefault(key, []).append(loop_form / cluster_form)
    report = {}
    for key in sorted(groups):
        vals = groups[key]
        lo, hi = min(vals), max(vals)
        report[key] = {"constant": vals[0], "count": len(vals),
                       "spread": (hi - lo) / vals[0]}
    return report


def homology_rule_report(lat):
    """Empirical trivial-loop count rule on the torus: across the full
    enumeration, trivial loops = C + C* - (wrapping C) - (wrapping C*).
    Returns (holds_everywhere, number of violations)."""
    n = 1 << lat.nsites
    if n > ENUM_STATE_CAP:
        raise StateSpaceTooLarge("enumeration capped at %d states"
                                 % ENUM_STATE_CAP)
    bad = 0
    for bits in range(n):
        c = lat.extract_walls(lat.config(bits))
        expect = (c.clusters + c.dual_clusters
                  - c.wrapping_clusters - c.wrapping_dual_clusters)
        if c.trivial_loops != expect:
            bad += 1
    return bad == 0, bad


class SampleRecord:
    """Outcome of one Metropolis chain."""

    def __init__(self, seed, sweeps, tallies, accepted, proposed,
                 mean_loops, mean_clusters, mean_dual_clusters, rows):
        self.seed = seed
        self.sweeps = sweeps
        self.tallies = tallies
        self.accepted = accepted
        self.proposed = proposed
        self.acceptance_rate = accepted / proposed if proposed else 0.0
        self.mean_loops = mean_loops
        self.mean_clusters = mean_clusters
        self.mean_dual_clusters = mean_dual_clusters
        self.rows = rows

    @property
    def sample_size(self):
        return sum(self.tallies.values())

    def summary(self):
        return {"seed": self.seed, "sweeps": self.sweeps,
                "acceptance_rate": self.acceptance_rate,
                "mean_loops": self.mean_loops,
                "mean_clusters": self.mean_clusters,
                "mean_dual_clusters": self.mean_dual_clusters,
                "sample_size": self.sample_size}


def _bond_ends(lat, bond):
    orient, i, j = lat.bond_coords(bond)
    a = lat.vertex_index(i, j)
    b = lat.vertex_index(i + 1, j) if orient == 0 else lat.vertex_index(i, j + 1)
    return a, b


def _plus_adjacency(lat, bits):
    """Vertex adjacency over |+> bonds as an index -> neighbors map."""
    adj = {v: [] for v in range(lat.w * lat.h)}
    for bond in range(lat.nsites):
        if (bits >> bond) & 1:
            a, b = _bond_ends(lat, bond)
            adj[a].append(b)
            adj[b].append(a)
    return adj


def _count_clusters(lat, bits):
    adj = _plus_adjacency(lat, bits)
    seen = set()
    comps = 0
    for v in adj:
        if v in seen:
            continue
        comps += 1
        stack = [v]
        seen.add(v)
        while stack:
            x = stack.pop()
            for y in adj[x]:
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
    return comps


def _delta_clusters(lat, bits, bond):
    """Change in C if the given bond is flipped, by a local
    connectivity search between its endpoints."""
    a, b = _bond_ends(lat, bond)
    without = bits & ~(1 << bond)
    adj = _plus_adjacency(lat, without)
    stack, seen = [a], {a}
    connected = False
    while stack:
        x = stack.pop()
        if x == b:
            connected = True
            break
        for y in adj[x]:
            if y not in seen:
                seen.add(y)
                stack.append(y)
    if (bits >> bond) & 1:   # removing a + bond
        return 0 if connected else 1
    return 0 if connected else -1


def metropolis_sample(lat, model, sweeps, seed, record_rows=False,
                      measure_every=None):
    """Single-bond-flip Metropolis chain for the cluster-form weight.

    One sweep proposes every bond once.  The acceptance ratio for a
    flip changing (dC, dE, dE*) is q^dC p^dE (1-p)^dE*.  The running
    cluster count is tracked incrementally with a full recount (and
    drift check) every 1000 accepted moves.  The generator is
    counter-based (Philox) so chains are reproducible and
    parallelizable by seed.
    """
    rng = np.random.Generator(np.random.Philox(seed))
    nb = lat.nsites
    nv = lat.w * lat.h
    ends = [_bond_ends(lat, bond) for bond in range(nb)]
    incident = [[] for _ in range(nv)]
    for bond, (a, b) in enumerate(ends):
        incident[a].append((bond, b))
        incident[b].append((bond, a))
    if measure_every is None:
        measure_every = max(1, sweeps // 10_000)

    bits = int(rng.integers(0, 1 << nb))
    clusters = _count_clusters(lat, bits)
    q, p = model.q_float, model.p_float
    ratio_e = p / (1 - p)
    # acceptance ratio lookup by (dC in {-1,0,1}, current spin of bond)
    acc = {(dc, s): (q ** dc) * (ratio_e ** (-1 if s else 1))
           for dc in (-1, 0, 1) for s in (0, 1)}

    tallies = {}
    accepted = proposed = 0
    since_recount = 0
    sum_loops = sum_c = sum_cstar = 0.0
    n_meas = 0
    rows = []
    for sweep in range(sweeps):
        # random-permutation scan: every bond exactly once per sweep,
        # which removes the bond-choice noise of an iid scan
        bonds = rng.permutation(nb)
        us = rng.random(nb)
        proposed += nb
        for bond, u in zip(bonds.tolist(), us.tolist()):
            a, b = ends[bond]
            spin = (bits >> bond) & 1
            without = bits & ~(1 << bond)
            # is b reachable from a without this bond?
            stack = [a]
            seen = 1 << a
            connected = False
            while stack:
                x = stack.pop()
                if x == b:
                    connected = True
                    break
                for bd, y in incident[x]:
                    if (without >> bd) & 1 and not (seen >> y) & 1:
                        seen |= 1 << y
                        stack.append(y)
            if connected:
                dc = 0
            else:
                dc = 1 if spin else -1
            r = acc[(dc, spin)]
            # waste-recycling tally: average over the accept/reject
            # outcome instead of recording only the realized state
            flipped = bits ^ (1 << bond)
            ra = r if r < 1.0 else 1.0
            tallies[flipped] = tallies.get(flipped, 0.0) + ra
            if ra < 1.0:
                tallies[bits] = tallies.get(bits, 0.0) + (1.0 - ra)
            if r >= 1.0 or u < r:
                bits = flipped
                clusters += dc
                accepted += 1
                since_recount += 1
                if since_recount >= RECOUNT_EVERY:
                    true_count = _count_clusters(lat, bits)
                    assert true_count == clusters, \
                        "incremental cluster count drifted"
                    since_recount = 0
        if sweep % measure_every == 0:
            census = lat.extract_walls(lat.config(bits))
            assert census.clusters == clusters, "cluster count drifted"
            sum_loops += census.loops
            sum_c += census.clusters
            sum_cstar += census.dual_clusters
            n_meas += 1
            if record_rows:
                rows.append((sweep, census.loops, census.clusters,
                             census.dual_clusters,
                             accepted / max(proposed, 1)))
    return SampleRecord(seed, sweeps, tallies, accepted, proposed,
                        sum_loops / n_meas, sum_c / n_meas,
                        sum_cstar / n_meas, rows)


def tv_distance(record, probs):
    """Total-variation distance between a chain's empirical
    distribution and an exact probability vector indexed by state."""
    total = record.sample_size
    acc = 0.0
    seen = 0.0
    for bits, count in record.tallies.items():
        acc += abs(count / total - probs[bits])
        seen += probs[bits]
    acc += 1.0 - seen  # states never visited
    return acc / 2.0


def detailed_balance_check(lat, model):
    """Exact detailed balance of the sampler on every single-flip pair.

    For rational parameters (levels 1 and 2) the check is symbolic over
    the rationals; otherwise exact in the level's number field via the
    weight ratio.  Returns (ok, pairs_checked).
    """
    rational = model.field.degree == 1
    n = 1 << lat.nsites
    if n > 4096:
        raise StateSpaceTooLarge("balance check is exhaustive")

    def weight(bits):
        census = lat.extract_walls(lat.config(bits))
        if rational:
            qf = model.q.coeffs[0]
            pf = model.p.coeffs[0]
            return (qf ** census.clusters * pf ** census.plus_edges
                    * (1 - pf) ** census.minus_edges)
        return cluster_weight_exact(census, model)

    pairs = 0
    for bits in range(n):
        wa = weight(bits)
        for bond in range(lat.nsites):
            other = bits ^ (1 << bond)
            if other < bits:
                continue
            wb = weight(other)
            # acceptance a->b is min(1, wb/wa); flow wa*min(1,wb/wa)
            # must equal wb*min(1,wa/wb) -- i.e. min(wa, wb) twice
            if rational:
                flow_ab = min(wa, wb)
                flow_ba = min(wb, wa)
                if flow_ab != flow_ba:
                    return False, pairs
            else:
                fa, fb = float(wa), float(wb)
                lhs = fa * min(1.0, fb / fa)
                rhs = fb * min(1.0, fa / fb)
                if abs(lhs - rhs) > 1e-12 * max(lhs, rhs):
                    return False, pairs
            # incremental dC must match the census difference
            dc = _delta_clusters(lat, bits, bond)
            ca = lat.extract_walls(lat.config(bits)).clusters
            cb = lat.extract_walls(lat.config(other)).clusters
            if cb - ca != dc:
                return False, pairs
            pairs += 1
    return True, pairs


def gibbs_law_check(basis, component, lat):
    """Measurement probabilities on one kernel component follow the
    loop-count Gibbs law: -log p = const - 2 log(d) * (#loops).
    Returns the largest absolute residual."""
    probs = measurement_distribution(basis, component)
    logd2 = 2.0 * math.log(basis.d) if basis.d != 1.0 else 0.0
    worst = 0.0
    items = list(probs.items())
    bits0, p0 = items[0]
    n0 = lat.extract_walls(lat.config(bits0)).loops
    for bits, p in items[1:]:
        nloops = lat.extract_walls(lat.config(bits)).loops
        lhs = math.log(p) - math.log(p0)
        rhs = logd2 * (nloops - n0)
        worst = max(worst, abs(lhs - rhs))
    return worst
