import dataclasses
import json
import math
import unittest

from pgfr_py.algebra.lattice import in_lattice
from pgfr_py.certifier import (
    CLASSIFY_NO,
    CLASSIFY_NO_PAIR,
    CLASSIFY_YES,
    PHENOMENON_NONE,
    PHENOMENON_PGFR,
    PHENOMENON_PGST,
    certificate_payload,
    certify,
    certify_double_star,
    certify_path,
    classify_double_star,
    classify_path,
    limit_blocks,
    negative_witness_path,
)
from pgfr_py.errors import InternalInconsistency, InvalidParameter
from pgfr_py.models import (
    ADMITTING_DECISIONS,
    DECISION_NONE,
    DECISION_NOT_COSPECTRAL,
    DECISION_PGST,
    DECISION_PROPER,
    PAIR_CENTERS,
    PAIR_EXTREMAL,
    PAIR_PENDANTS,
    IntMatrix,
)
from pgfr_py.support import path_relation_holds, path_support_partition, relation_lattice_path


def is_power_of_two(n):
    return n & (n - 1) == 0


class PathCertificateTest(unittest.TestCase):
    def test_proper_fractional_revival_on_p6(self):
        cert = certify_path(6, 2)
        self.assertEqual(cert.decision, DECISION_PROPER)
        self.assertEqual(cert.gcd_value, 3)
        self.assertIsNone(cert.witness)

    def test_negative_instance_has_witness(self):
        cert = certify_path(6, 1)
        self.assertEqual(cert.decision, DECISION_NONE)
        self.assertEqual(cert.gcd_value, 1)
        minus = cert.partition.phi_minus
        self.assertEqual(
            sum(c for label, c in zip(cert.lattice.support_indices, cert.witness) if label in minus),
            1,
        )
        full = [0] * 5
        for label, c in zip(cert.lattice.support_indices, cert.witness):
            full[label - 1] = c
        self.assertTrue(path_relation_holds(6, full))

    def test_state_transfer_on_p4(self):
        cert = certify_path(4, 1)
        self.assertEqual(cert.decision, DECISION_PGST)
        self.assertEqual(cert.gcd_value, 2)

    def test_center_and_range(self):
        self.assertEqual(certify_path(5, 3).decision, DECISION_NOT_COSPECTRAL)
        with self.assertRaises(InvalidParameter):
            certify_path(5, 0)

    def test_agrees_with_classifier_up_to_64(self):
        for n in range(2, 65):
            for a in range(1, n // 2 + 1):
                cert = certify_path(n, a)
                admits = cert.decision in ADMITTING_DECISIONS
                self.assertEqual(admits, classify_path(n, a) == CLASSIFY_YES, (n, a))
                self.assertEqual(cert.decision == DECISION_PGST, is_power_of_two(n), (n, a))

    def test_closed_form_witnesses_up_to_64(self):
        for n in range(2, 65):
            for a in range(1, n // 2 + 1):
                if classify_path(n, a) != CLASSIFY_NO:
                    continue
                witness = negative_witness_path(n, a)
                self.assertEqual(len(witness), n - 1)
                self.assertTrue(path_relation_holds(n, witness), (n, a))

    def test_witness_for_positive_instance_is_rejected(self):
        with self.assertRaises(InvalidParameter):
            negative_witness_path(8, 1)

    def test_support_mismatch_is_rejected(self):
        lattice = relation_lattice_path(6, path_support_partition(6, 1))
        with self.assertRaises(InvalidParameter):
            certify(path_support_partition(6, 2), lattice)

    def test_unverified_rows_are_checked(self):
        sp = path_support_partition(4, 1)
        forged = dataclasses.replace(
            relation_lattice_path(4, sp),
            basis=IntMatrix(rows=((1, 1, 1),), cols=3),
            verified=False,
        )
        with self.assertRaises(InternalInconsistency):
            certify(sp, forged)


class DoubleStarCertificateTest(unittest.TestCase):
    def test_balanced_centers_are_pgst(self):
        for m in range(1, 11):
            cert = certify_double_star(m, m, PAIR_CENTERS)
            self.assertEqual(cert.decision, DECISION_PGST, m)
            self.assertEqual(cert.gcd_value % 2, 0)

    def test_s22_pendants_have_no_revival(self):
        cert = certify_double_star(2, 2, PAIR_PENDANTS)
        self.assertEqual(cert.decision, DECISION_NONE)
        self.assertEqual(cert.gcd_value, 1)
        self.assertTrue(in_lattice(cert.lattice.basis, (-2, 1, 3, -2)))
        self.assertIsNotNone(cert.witness)

    def test_pendant_pair_gcd(self):
        for m in (1, 3, 4, 5, 6, 7, 8, 11):
            cert = certify_double_star(m, 2, PAIR_PENDANTS)
            self.assertEqual(cert.gcd_value, m + 6, m)
            self.assertEqual(cert.decision, DECISION_PGST if m % 2 == 0 else DECISION_PROPER, m)
            mirrored = certify_double_star(2, m, PAIR_PENDANTS)
            self.assertEqual(mirrored.gcd_value, m + 6)
        self.assertEqual(certify_double_star(7, 2, PAIR_PENDANTS).gcd_value, 13)

    def test_pairs_without_strong_cospectrality(self):
        self.assertEqual(certify_double_star(3, 4, PAIR_CENTERS).decision, DECISION_NOT_COSPECTRAL)
        self.assertEqual(certify_double_star(3, 4, PAIR_PENDANTS).decision, DECISION_NOT_COSPECTRAL)
        self.assertEqual(certify_double_star(3, 1, PAIR_PENDANTS).decision, DECISION_NOT_COSPECTRAL)

    def test_extremal_pair(self):
        self.assertEqual(certify_double_star(1, 1, PAIR_EXTREMAL).decision, DECISION_PGST)
        with self.assertRaises(InvalidParameter):
            certify_double_star(2, 2, PAIR_EXTREMAL)
        with self.assertRaises(InvalidParameter):
            certify_double_star(2, 2, 'leaves')


class ClassifierTest(unittest.TestCase):
    def test_path_examples(self):
        self.assertEqual(classify_path(18, 5), CLASSIFY_YES)
        self.assertEqual(classify_path(12, 3), CLASSIFY_NO)
        self.assertEqual(classify_path(9, 2), CLASSIFY_YES)
        self.assertEqual(classify_path(10, 1), CLASSIFY_NO)
        self.assertEqual(classify_path(10, 3), CLASSIFY_YES)
        self.assertEqual(classify_path(5, 3), CLASSIFY_NO_PAIR)

    def test_double_star_cases(self):
        def summary(m, n):
            return [(item.pair, item.vertices, item.phenomenon) for item in classify_double_star(m, n).pairs]

        self.assertEqual(summary(3, 3), [(PAIR_CENTERS, (4, 5), PHENOMENON_PGST)])
        self.assertEqual(
            summary(1, 1),
            [(PAIR_CENTERS, (2, 3), PHENOMENON_PGST), (PAIR_EXTREMAL, (1, 4), PHENOMENON_PGST)],
        )
        self.assertEqual(
            summary(2, 2),
            [(PAIR_CENTERS, (3, 4), PHENOMENON_PGST), (PAIR_PENDANTS, (1, 2), PHENOMENON_NONE)],
        )
        self.assertEqual(summary(5, 2), [(PAIR_PENDANTS, (1, 2), PHENOMENON_PGFR)])
        self.assertEqual(summary(2, 5), [(PAIR_PENDANTS, (8, 9), PHENOMENON_PGFR)])
        self.assertEqual(summary(4, 7), [])


class LimitBlockTest(unittest.TestCase):
    def test_blocks_for_gcd_three(self):
        blocks = limit_blocks(certify_path(6, 2))
        self.assertEqual(len(blocks), 3)
        self.assertAlmostEqual(blocks[0].cross, 0.0)
        self.assertAlmostEqual(blocks[1].cross, 0.75)
        self.assertAlmostEqual(blocks[2].cross, 0.75)
        for block in blocks:
            (p, q), (r, s) = block.block
            self.assertAlmostEqual(abs(p) ** 2 + abs(q) ** 2, 1.0)
            self.assertAlmostEqual(abs(q) ** 2, block.cross)
            self.assertAlmostEqual(abs(p.conjugate() * r + q.conjugate() * s), 0.0)

    def test_state_transfer_block(self):
        blocks = limit_blocks(certify_path(4, 1))
        self.assertEqual(len(blocks), 2)
        self.assertAlmostEqual(blocks[1].cross, 1.0)
        self.assertAlmostEqual(blocks[1].angle, math.pi)

    def test_unconstrained_phase_is_sampled(self):
        cert = certify_path(2, 1)
        self.assertEqual(cert.gcd_value, 0)
        self.assertEqual(len(limit_blocks(cert)), 8)
        self.assertEqual(len(limit_blocks(cert, samples=3)), 3)

    def test_not_cospectral(self):
        with self.assertRaises(InvalidParameter):
            limit_blocks(certify_path(5, 3))


class PayloadTest(unittest.TestCase):
    def test_payload_fields(self):
        payload = certificate_payload(certify_path(6, 2), dump_lattice=True)
        json.dumps(payload)
        self.assertEqual(payload['decision'], DECISION_PROPER)
        self.assertEqual(payload['gcd'], 3)
        self.assertIsNone(payload['witness'])
        self.assertEqual(payload['support'], {'phi0': [4], 'phi_plus': [0, 2], 'phi_minus': [1, 3, 5]})
        self.assertEqual(payload['lattice']['indices'], [1, 2, 3, 5])
        self.assertEqual(len(payload['lattice']['values']), 4)
        self.assertEqual(len(payload['basis']), 2)

    def test_payload_without_lattice(self):
        payload = certificate_payload(certify_path(5, 3))
        self.assertEqual(payload['decision'], DECISION_NOT_COSPECTRAL)
        self.assertIsNone(payload['support'])
        self.assertEqual(payload['basis'], [])
        self.assertNotIn('lattice', payload)


if __name__ == '__main__':
    unittest.main()
