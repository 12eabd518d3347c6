import math
import unittest

import numpy as np

from pgfr_py.certifier import CLASSIFY_YES, classify_path
from pgfr_py.dynamics import (
    convergent_denominators,
    default_horizon,
    default_step,
    leakage_curve,
    leakage_scan,
    pair_block,
    pgst_target,
    phase_solve,
    revival_report,
    revival_target,
    search_revival,
    wrap_angle,
)
from pgfr_py.errors import InfeasibleTarget, InvalidParameter
from pgfr_py.graphs import laplacian, make_double_star
from pgfr_py.models import PhaseTarget
from pgfr_py.spectral import eigendecompose, path_spectrum
from pgfr_py.support import path_support_partition, relation_lattice_path


def eigenvalue_map(sd):
    return dict(zip(sd.labels, sd.eigenvalues))


class RevivalReportTest(unittest.TestCase):
    def test_exact_fractional_revival_on_p3(self):
        report = revival_report(path_spectrum(3), 1, 3, 2 * math.pi / 3)
        self.assertAlmostEqual(report.cross, 0.75, places=12)
        self.assertAlmostEqual(report.at_a, 0.25, places=12)
        self.assertLess(report.leakage, 1e-12)
        self.assertEqual(report.block_phases.shape, (2, 2))

    def test_block_and_full_matrix_agree(self):
        sd = eigendecompose(laplacian(make_double_star(3, 2)))
        times = np.linspace(0.0, 40.0, 57)
        blocks = pair_block(sd, 1, 2, times)
        for t, block in zip(times, blocks):
            report = revival_report(sd, 1, 2, t)
            self.assertAlmostEqual(abs(block[0, 0]) ** 2, report.at_a, delta=1e-10)
            self.assertAlmostEqual(abs(block[1, 0]) ** 2, report.cross, delta=1e-10)

    def test_pair_validation(self):
        sd = path_spectrum(4)
        with self.assertRaises(InvalidParameter):
            revival_report(sd, 2, 2, 1.0)
        with self.assertRaises(InvalidParameter):
            revival_report(sd, 1, 5, 1.0)


class SearchRevivalTest(unittest.TestCase):
    def test_p2_perfect_transfer(self):
        report = search_revival(path_spectrum(2), 1, 2)
        self.assertGreater(report.cross, 0.99)
        self.assertLess(report.leakage, 0.01)

    def test_p4_pretty_good_transfer(self):
        report = search_revival(path_spectrum(4), 1, 4)
        self.assertGreater(report.cross, 0.9)
        self.assertLess(report.leakage, 0.01)

    def test_p3_fractional_revival(self):
        report = search_revival(path_spectrum(3), 1, 3)
        self.assertAlmostEqual(report.cross, 0.75, delta=0.01)
        self.assertLess(report.leakage, 0.01)

    def test_p6_proper_revival(self):
        report = search_revival(path_spectrum(6), 2, 5)
        self.assertAlmostEqual(report.cross, 0.75, delta=0.15)
        self.assertLess(report.leakage, 0.01)

    def test_deterministic(self):
        sd = path_spectrum(5)
        first = search_revival(sd, 1, 5)
        second = search_revival(sd, 1, 5)
        self.assertEqual(first.time, second.time)
        self.assertEqual(first.cross, second.cross)

    def test_min_leakage_never_grows_when_horizon_doubles(self):
        checked = 0
        for n in range(3, 11):
            sd = path_spectrum(n)
            horizon = default_horizon(sd)
            for a in range(1, n // 2 + 1):
                if classify_path(n, a) != CLASSIFY_YES:
                    continue
                short = search_revival(sd, a, n + 1 - a, horizon=horizon)
                long = search_revival(sd, a, n + 1 - a, horizon=2 * horizon)
                self.assertLessEqual(long.min_leakage, short.min_leakage + 1e-12, (n, a))
                self.assertLessEqual(short.min_leakage, short.leakage + 1e-10, (n, a))
                self.assertLessEqual(short.min_leakage_time, horizon)
                checked += 1
        self.assertGreater(checked, 5)

    def test_plain_report_is_its_own_minimum(self):
        report = revival_report(path_spectrum(4), 1, 4, 1.5)
        self.assertEqual(report.min_leakage_time, 1.5)
        self.assertEqual(report.min_leakage, report.leakage)
        with self.assertRaises(ValueError):
            report.block_phases[0, 0] = 1.0

    def test_bad_eps(self):
        with self.assertRaises(InvalidParameter):
            search_revival(path_spectrum(4), 1, 4, eps=0.0)

    def test_single_vertex_has_no_time_scale(self):
        with self.assertRaises(InvalidParameter):
            default_horizon(path_spectrum(1))


class LeakageScanTest(unittest.TestCase):
    def test_longer_horizon_never_does_worse(self):
        sd = path_spectrum(6)
        step = default_step(sd)
        horizon = default_horizon(sd)

        def best(h):
            _, _, cross, leakage = leakage_scan(sd, 1, 6, h, step)
            return float(np.min(leakage[cross > 0.01]))

        self.assertLessEqual(best(2 * horizon), best(horizon))

    def test_grid_nests(self):
        sd = path_spectrum(4)
        step = default_step(sd)
        short = leakage_scan(sd, 1, 4, 10.0, step)[0]
        long = leakage_scan(sd, 1, 4, 20.0, step)[0]
        np.testing.assert_array_equal(long[:len(short)], short)

    def test_bad_arguments(self):
        sd = path_spectrum(4)
        with self.assertRaises(InvalidParameter):
            leakage_scan(sd, 1, 4, 0.0)
        with self.assertRaises(InvalidParameter):
            leakage_scan(sd, 1, 4, 5.0, -1.0)


class LeakageCurveTest(unittest.TestCase):
    def test_zero_horizon(self):
        rows = leakage_curve(path_spectrum(4), 1, 4, 0.0, 50)
        self.assertEqual(len(rows), 1)
        for found, expected in zip(rows[0], (0.0, 1.0, 0.0, 0.0)):
            self.assertAlmostEqual(found, expected, places=12)

    def test_curve_rows(self):
        rows = leakage_curve(path_spectrum(2), 1, 2, math.pi, 5)
        self.assertEqual(len(rows), 5)
        t, at_a, cross, leakage = rows[2]
        self.assertAlmostEqual(t, math.pi / 2)
        self.assertAlmostEqual(cross, 1.0, places=12)
        self.assertAlmostEqual(at_a, 0.0, places=12)
        for row in rows:
            self.assertAlmostEqual(sum(row[1:]), 1.0, places=12)

    def test_bad_arguments(self):
        with self.assertRaises(InvalidParameter):
            leakage_curve(path_spectrum(4), 1, 4, -1.0, 10)
        with self.assertRaises(InvalidParameter):
            leakage_curve(path_spectrum(4), 1, 4, 1.0, 0)


class PhaseSolveTest(unittest.TestCase):
    def test_single_eigenvalue(self):
        target = PhaseTarget(angles={1: math.pi}, tolerance=1e-6)
        self.assertAlmostEqual(phase_solve({1: 2.0}, target), math.pi / 2)

    def test_zero_eigenvalue_needs_zero_angle(self):
        self.assertEqual(phase_solve({0: 0.0}, PhaseTarget(angles={0: 0.0}, tolerance=0.1)), 0.0)
        with self.assertRaises(InfeasibleTarget):
            phase_solve({0: 0.0, 1: 2.0}, PhaseTarget(angles={0: 1.0, 1: 0.0}, tolerance=0.1))

    def test_p4_transfer_target_is_feasible(self):
        sd = path_spectrum(4)
        sp = path_support_partition(4, 1)
        target = pgst_target(sp, 0.05)
        y = phase_solve(eigenvalue_map(sd), target, lattice=relation_lattice_path(4, sp))
        self.assertIsNotNone(y)
        for label, angle in target.angles.items():
            mu = eigenvalue_map(sd)[label]
            self.assertLess(abs(float(wrap_angle(mu * y - angle))), 0.05)
        self.assertGreater(revival_report(sd, 1, 4, y).cross, 0.95)

    def test_p8_transfer_target_uses_independent_eigenvalues(self):
        sd = path_spectrum(8)
        sp = path_support_partition(8, 1)
        lattice = relation_lattice_path(8, sp)
        self.assertEqual(lattice.rank, 3)
        target = pgst_target(sp, 0.05)
        y = phase_solve(eigenvalue_map(sd), target, lattice=lattice)
        self.assertIsNotNone(y)
        for label, angle in target.angles.items():
            mu = eigenvalue_map(sd)[label]
            self.assertLess(abs(float(wrap_angle(mu * y - angle))), 0.05, label)
        self.assertGreater(revival_report(sd, 1, 8, y).cross, 0.99)

    def test_target_angles_are_read_only(self):
        target = pgst_target(path_support_partition(4, 1), 0.05)
        with self.assertRaises(TypeError):
            target.angles[1] = 0.0

    def test_p6_transfer_target_is_infeasible(self):
        sd = path_spectrum(6)
        sp = path_support_partition(6, 1)
        with self.assertRaises(InfeasibleTarget) as caught:
            phase_solve(eigenvalue_map(sd), pgst_target(sp, 0.05), lattice=relation_lattice_path(6, sp))
        self.assertTrue(caught.exception.relation)
        self.assertAlmostEqual(abs(caught.exception.mismatch), math.pi, places=9)

    def test_p6_revival_target_is_consistent(self):
        sd = path_spectrum(6)
        sp = path_support_partition(6, 2)
        target = revival_target(sp, 2 * math.pi / 3, 0.05)
        y = phase_solve(eigenvalue_map(sd), target, lattice=relation_lattice_path(6, sp))
        self.assertIsNotNone(y)
        self.assertAlmostEqual(revival_report(sd, 2, 5, y).cross, 0.75, delta=0.1)

    def test_zero_budget(self):
        sd = path_spectrum(4)
        target = pgst_target(path_support_partition(4, 1), 0.05)
        self.assertIsNone(phase_solve(eigenvalue_map(sd), target, budget=0))

    def test_bad_arguments(self):
        with self.assertRaises(InvalidParameter):
            phase_solve({1: 2.0}, PhaseTarget(angles={1: 0.0}, tolerance=0.0))
        with self.assertRaises(InvalidParameter):
            phase_solve({1: 2.0}, PhaseTarget(angles={2: 0.0}, tolerance=0.1))
        with self.assertRaises(InvalidParameter):
            phase_solve({1: 2.0}, PhaseTarget(angles={1: 0.0}, tolerance=0.1), budget=-1)

    def test_convergents(self):
        self.assertEqual(convergent_denominators(math.sqrt(2), 100), [1, 2, 5, 12, 29, 70])
        self.assertEqual(convergent_denominators(0.5, 100), [1, 2])


if __name__ == '__main__':
    unittest.main()
