import cmath
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from helpers import cauchy_ray_direct, closed_jump
from qasym.cocycle import (CHOptions, Cocycle, asymptotic_coefficients,
                           cauchy_heine_many, cauchy_heine_psi,
                           classify_levels, ladder_bound_constant,
                           ladder_jump, level_filter, multilevel_split,
                           overlap_rays, verify_difference_realization)
from qasym.geometry import Sector, make_cyclic_covering

Q, K1, K2, A = 2.0, 1.0, 2.0, 1.3
TIGHT = CHOptions(tol=1e-12)


def four_sector_covering():
    return make_cyclic_covering(4, 0.4, math.radians(60), math.radians(45))


def two_level_pair(cov):
    """Slow (level-1) jumps on overlaps 1, 3; fast (level-2) on 0, 2."""
    cuts = [cov.overlap_bisector(p) for p in range(4)]
    slow = Cocycle(cov, deltas=(None, ladder_jump(Q, K1, A, cuts[1], 0.7),
                                None, ladder_jump(Q, K1, A, cuts[3], 0.4j)),
                   levels=(2, 1, 2, 1))
    fast = Cocycle(cov, deltas=(ladder_jump(Q, K2, A, cuts[0], 0.9),
                                None, ladder_jump(Q, K2, A, cuts[2], -0.6),
                                None),
                   levels=(2, 1, 2, 1))
    return slow, fast


class TestLadderJump:
    def test_matches_independent_formula(self):
        for cut in (0.0, math.pi / 2, math.pi, -math.pi / 2, 2.3):
            lib = ladder_jump(Q, K1, A, cut, 0.7 + 0.2j)
            mine = closed_jump(Q, K1, A, cut, 0.7 + 0.2j)
            for dd in (-0.4, 0.0, 0.4):
                for r in (0.05, 0.3):
                    xi = r * cmath.exp(1j * (cut + dd))
                    for t in (0.05, 0.11 * cmath.exp(0.2j)):
                        assert complex(lib(t, xi)) == pytest.approx(
                            complex(mine(t, xi)), rel=1e-12)

    @given(st.integers(0, 8), st.floats(0.01, 0.35), st.floats(-0.5, 0.5),
           st.floats(0.1, 0.999), st.floats(-0.8, 0.8))
    def test_shrinking_disc_bound(self, N, r, dd, tfrac, targ):
        k = K2
        amp = 0.8 - 0.1j
        delta = ladder_jump(Q, k, A, 0.3, amp)
        C = ladder_bound_constant(Q, k, 0.8, math.pi)
        t = tfrac * Q ** (-N / (2.0 * k)) * cmath.exp(1j * targ)
        xi = r * cmath.exp(1j * (0.3 + dd))
        val = abs(complex(delta(t, xi)))
        assert val <= abs(amp) * C * (A * r) ** N * (1 + 1e-9)

    def test_bound_needs_the_shrinking_disc(self):
        # |t| well outside the N-th disc: the (A|xi|)^N law genuinely fails
        delta = ladder_jump(Q, K1, A, 0.0, 1.0)
        C = ladder_bound_constant(Q, K1, 0.0, math.pi)
        val = abs(complex(delta(0.9, 0.3)))
        assert val > C * (A * 0.3) ** 5

    def test_zero_at_origin(self):
        delta = ladder_jump(Q, K1, A, 0.0, 1.0)
        assert complex(delta(0.05, 0.0)) == 0.0

    def test_bound_constant_formula(self):
        assert ladder_bound_constant(2.0, 1.0, 0.0, math.pi) == 1.0
        got = ladder_bound_constant(2.0, 2.0, 0.5, 1.0)
        assert got == pytest.approx(math.exp(4.0 / math.log(2.0) * 0.5))


class TestCauchyHeine:
    def test_single_ray_matches_direct_quadrature(self):
        cov = four_sector_covering()
        cuts = [cov.overlap_bisector(p) for p in range(4)]
        delta = ladder_jump(Q, K1, A, cuts[1], 0.7)
        coc = Cocycle(cov, deltas=(None, delta, None, None))
        t = 0.15
        # probe in the core of sector 2, where no Plemelj correction applies
        eps = 0.1 * cmath.exp(1j * (cuts[1] + 0.9))
        lib = cauchy_heine_psi(coc, t, eps, 2, TIGHT)
        oracle = cauchy_ray_direct(delta, t, cuts[1], coc.rays[1].length, eps)
        assert complex(lib) == pytest.approx(oracle, rel=1e-7)

    def test_plemelj_jump_across_single_cut(self):
        cov = four_sector_covering()
        cuts = [cov.overlap_bisector(p) for p in range(4)]
        hw = cov.overlap_half_width(1)
        delta = ladder_jump(Q, K1, A, cuts[1], 0.7)
        coc = Cocycle(cov, deltas=(None, delta, None, None))
        t = 0.15
        for frac in (0.3, 0.6):
            for side in (-0.3, 0.3):
                eps = frac * coc.rays[1].length \
                    * cmath.exp(1j * (cuts[1] + side * hw))
                below = cauchy_heine_psi(coc, t, eps, 1, TIGHT)
                above = cauchy_heine_psi(coc, t, eps, 2, TIGHT)
                jump = complex(np.asarray(delta(t, eps)).reshape(()))
                assert complex(above - below) == pytest.approx(
                    jump, rel=1e-6, abs=1e-11)

    def test_full_cocycle_jump_identity(self):
        cov = four_sector_covering()
        slow, fast = two_level_pair(cov)
        t = 0.1
        for coc in (slow, fast):
            for p in range(4):
                if not coc.has_jump(p):
                    continue
                c = cov.overlap_bisector(p)
                hw = cov.overlap_half_width(p)
                eps = 0.5 * coc.rays[p].length * cmath.exp(1j * (c + 0.4 * hw))
                lo = cauchy_heine_psi(coc, t, eps, p, TIGHT)
                hi = cauchy_heine_psi(coc, t, eps, (p + 1) % 4, TIGHT)
                jump = complex(np.asarray(coc.jump(p, t, eps)).reshape(()))
                assert complex(hi - lo) == pytest.approx(
                    jump, rel=1e-4, abs=1e-10)

    def test_no_correction_beyond_ray_tip(self):
        cov = four_sector_covering()
        cuts = [cov.overlap_bisector(p) for p in range(4)]
        delta = ladder_jump(Q, K1, A, cuts[1], 0.7)
        coc = Cocycle(cov, deltas=(None, delta, None, None))
        t = 0.15
        eps = 1.02 * coc.rays[1].length * cmath.exp(1j * (cuts[1] + 0.05))
        below = cauchy_heine_psi(coc, t, eps, 1, TIGHT)
        above = cauchy_heine_psi(coc, t, eps, 2, TIGHT)
        assert abs(complex(above - below)) < 1e-10

    def test_rejects_point_outside_claimed_sector(self):
        cov = four_sector_covering()
        slow, _ = two_level_pair(cov)
        bad = 0.1 * cmath.exp(1j * (cov.sector(2).bisector))
        with pytest.raises(ValueError):
            cauchy_heine_psi(slow, 0.1, bad, 0, TIGHT)


class TestAsymptoticCoefficients:
    def test_remainder_order(self):
        cov = four_sector_covering()
        slow, _ = two_level_pair(cov)
        t = 0.05
        N = 2
        phis = asymptotic_coefficients(slow, t, N, CHOptions(tol=1e-13))
        assert len(phis) == N + 1
        c = cov.sector(0).bisector
        rems = []
        for scale in (1.0, 0.5):
            eps = 0.05 * scale * cmath.exp(1j * c)
            psi = cauchy_heine_psi(slow, t, eps, 0, CHOptions(tol=1e-13))
            part = sum(phis[n] * eps ** n for n in range(N + 1))
            rems.append(abs(complex(psi) - part))
        # halving eps should shrink the remainder roughly 2^{N+1}-fold
        ratio = rems[0] / rems[1]
        assert 2.0 ** (N + 1) / 2.5 <= ratio <= 2.0 ** (N + 1) * 2.5

    def test_constant_term_matches_value_at_tiny_eps(self):
        cov = four_sector_covering()
        slow, _ = two_level_pair(cov)
        t = 0.05
        phis = asymptotic_coefficients(slow, t, 0, CHOptions(tol=1e-13))
        c = cov.sector(0).bisector
        psi = cauchy_heine_psi(slow, t, 1e-8 * cmath.exp(1j * c), 0,
                               CHOptions(tol=1e-13))
        assert complex(psi) == pytest.approx(complex(phis[0]), rel=1e-6)

    def test_coefficients_shared_across_sectors(self):
        # remainders after subtracting the SAME phi_0, phi_1 stay O(eps^2)
        # in every sector, so the family expansion is genuinely common
        cov = four_sector_covering()
        slow, _ = two_level_pair(cov)
        t = 0.05
        phis = asymptotic_coefficients(slow, t, 1, CHOptions(tol=1e-13))
        for p in range(4):
            c = cov.sector(p).bisector
            rems = []
            for scale in (1.0, 0.5):
                eps = 0.05 * scale * cmath.exp(1j * c)
                psi = cauchy_heine_psi(slow, t, eps, p, CHOptions(tol=1e-13))
                rems.append(abs(complex(psi) - complex(phis[0])
                                - complex(phis[1]) * eps))
            assert 4.0 / 2.5 <= rems[0] / rems[1] <= 4.0 * 2.5


class TestRealizationAndSplit:
    @staticmethod
    def _branches(cov, slow, fast, entire):
        def branch(p):
            def G(t_arg, eps):
                e = np.atleast_1d(np.asarray(eps, dtype=complex))
                sec = np.full(e.shape, p, dtype=int)
                vals = (entire(e)
                        + cauchy_heine_many(slow, t_arg, e, sec, TIGHT)
                        + cauchy_heine_many(fast, t_arg, e, sec, TIGHT))
                return vals[0] if np.ndim(eps) == 0 else vals
            return G

        return [branch(p) for p in range(cov.n)]

    def test_difference_realization(self):
        cov = four_sector_covering()
        slow, fast = two_level_pair(cov)
        entire = lambda e: np.exp(0.3 * e)
        G = self._branches(cov, slow, fast, entire)
        checks = verify_difference_realization(G, [slow, fast], 0.1)
        assert len(checks) == 16
        assert max(c.abs_err for c in checks) < 1e-10

    def test_realization_flags_wrong_jump(self):
        cov = four_sector_covering()
        slow, fast = two_level_pair(cov)
        entire = lambda e: np.exp(0.3 * e)
        G = self._branches(cov, slow, fast, entire)
        cuts = [cov.overlap_bisector(p) for p in range(4)]
        wrong = Cocycle(cov, deltas=(None,
                                     ladder_jump(Q, K1, A, cuts[1], 1.05),
                                     None,
                                     ladder_jump(Q, K1, A, cuts[3], 0.4j)),
                        levels=slow.levels)
        checks = verify_difference_realization(G, [wrong, fast], 0.2,
                                               radius_frac=0.9)
        assert max(c.abs_err for c in checks) > 1e-4

    def test_split_recovers_planted_analytic_part(self):
        cov = four_sector_covering()
        slow, fast = two_level_pair(cov)
        entire = lambda e: np.exp(0.3 * e) + 0.2 * e * e
        G = self._branches(cov, slow, fast, entire)
        split = multilevel_split(G, slow, fast, 0.1, opts=TIGHT, j_max=2)
        assert split.max_spread < 1e-10
        assert split.max_realization_err < 1e-10
        assert split.probes and len(split.cascade) == 3
        for j, eps, per_sector in split.probes:
            want = complex(np.asarray(entire(np.asarray([eps]))).reshape(1)[0])
            for p, got in per_sector.items():
                assert got == pytest.approx(want, rel=1e-8, abs=1e-10)
        # glued mean agrees too, and cascade radii halve
        for eps, val in split.glued_values():
            want = complex(np.asarray(entire(np.asarray([eps]))).reshape(1)[0])
            assert val == pytest.approx(want, rel=1e-8, abs=1e-10)
        radii = [row.radius for row in split.cascade]
        assert radii[1] == pytest.approx(radii[0] / 2)
        assert radii[2] == pytest.approx(radii[0] / 4)

    def test_level_filter_splits_declared_levels(self):
        cov = four_sector_covering()
        slow, fast = two_level_pair(cov)
        only_slow = level_filter(slow, 1)
        assert [only_slow.has_jump(p) for p in range(4)] \
            == [False, True, False, True]
        only_fast = level_filter(fast, 2)
        assert [only_fast.has_jump(p) for p in range(4)] \
            == [True, False, True, False]
        with pytest.raises(ValueError):
            level_filter(Cocycle(cov, deltas=(None,) * 4), 1)


class TestGeometryHelpers:
    def test_overlap_rays_sit_on_bisectors(self):
        cov = four_sector_covering()
        rays = overlap_rays(cov, 0.8)
        for p, ray in enumerate(rays):
            assert ray.direction == pytest.approx(cov.overlap_bisector(p))
            assert ray.length == pytest.approx(0.8 * cov.overlap_radius(p))
        with pytest.raises(ValueError):
            overlap_rays(cov, 1.0)

    def test_classify_levels_from_inner_sector_geometry(self):
        cov = four_sector_covering()
        openings = [50.0, 50.0, 30.0, 30.0]
        inner = [Sector(cov.sector(p).bisector, math.radians(openings[p]),
                        radius=0.2) for p in range(4)]
        assert classify_levels(cov, inner) == (2, 1, 1, 1)
        # radially disjoint rings never intersect, whatever the angles
        rings = [Sector(cov.sector(p).bisector, math.radians(80.0),
                        radius=0.1 * (p + 1), inner_radius=0.1 * p + 0.01)
                 for p in range(4)]
        assert classify_levels(cov, rings) == (1, 1, 1, 1)
        with pytest.raises(ValueError):
            classify_levels(cov, inner[:3])

    def test_cocycle_shape_validation(self):
        cov = four_sector_covering()
        with pytest.raises(ValueError):
            Cocycle(cov, deltas=(None, None))
        with pytest.raises(ValueError):
            Cocycle(cov, deltas=(None,) * 4, levels=(1, 2))
