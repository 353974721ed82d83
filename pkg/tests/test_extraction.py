from fractions import Fraction

import numpy as np
import pytest

from l1cert import (
    InputError,
    PointMap,
    SeparationCertificate,
    SignedCoordinate,
    SupVector,
    VerificationError,
    build_m_ell1,
    certified_lower_constant,
    certify_separation,
    extract_thm4a,
    extract_thm4b,
    kuratowski_embed,
    lower_constant_grid,
    partition_classes,
    thresholds,
    validate_certificate,
)
from l1cert.errors import SeparationFailure

F = Fraction


def sign_pattern_family(n):
    """f_i(s) = +1 if i in s else -1, s ranging over all subsets of [1..n]."""
    coords = [format(s, "x") for s in range(1 << n)]
    rows = [[F(1) if (s >> i) & 1 else F(-1) for s in range(1 << n)] for i in range(n)]
    return [SupVector.from_fractions(r, coords) for r in rows]


def scaled_kuratowski(n, factors_den, factor_nums):
    """Kuratowski map with each coordinate stretched by factor_nums[s]/factors_den."""
    sp, _ = build_m_ell1(n)
    pm = kuratowski_embed(sp, "0")
    num = pm.image_num.astype(np.int64) * np.asarray(factor_nums, dtype=np.int64)
    return PointMap(
        source=sp, coord_labels=pm.coord_labels, image_num=num, image_den=factors_den
    )


class TestCertifySeparation:
    def test_sign_pattern_certificate(self):
        vecs = sign_pattern_family(3)
        cert = certify_separation(vecs, F(-1), F(2))
        assert cert.K == 1
        assert cert.ratio == 1
        assert certified_lower_constant(cert) == 1
        validate_certificate(cert, vecs)

    def test_slightly_larger_delta_fails(self):
        vecs = sign_pattern_family(3)
        with pytest.raises(SeparationFailure) as exc:
            certify_separation(vecs, F(-1), F(2) + F(1, 1000))
        assert exc.value.mask == 1  # A = {1} is the first subset with no witness

    def test_kuratowski_m3_integers(self):
        sp, _ = build_m_ell1(3)
        pm = kuratowski_embed(sp, "0")
        vecs = [pm.image_vector(str(i)) for i in (1, 2, 3)]
        cert = certify_separation(vecs, F(-1), F(2))
        assert cert.K == 1
        validate_certificate(cert, vecs)

    def test_witness_scan_order_is_deterministic(self):
        vecs = sign_pattern_family(2)
        cert = certify_separation(vecs, F(-1), F(2))
        again = certify_separation(vecs, F(-1), F(2))
        assert cert.witnesses == again.witnesses

    def test_bad_delta_rejected(self):
        with pytest.raises(InputError):
            certify_separation(sign_pattern_family(2), F(0), F(0))


class TestCertifiedLowerConstant:
    def test_ratio_and_lower_constant_formulas(self):
        def cert_with(delta, k_const):
            return SeparationCertificate(
                r=F(-1), delta=delta, K=k_const, member_labels=("1",), witnesses={}
            )

        assert certified_lower_constant(cert_with(F(2), F(1))) == 1
        assert cert_with(F(2), F(1)).ratio == 1
        assert certified_lower_constant(cert_with(F(1, 2), F(3, 2))) == F(1, 4)
        assert cert_with(F(1, 2), F(3, 2)).ratio == 6
        d = F(6, 5)
        assert cert_with(2 * (4 - 3 * d), d).ratio == d / (4 - 3 * d) == 3


class TestValidateCertificate:
    def test_tampered_witness_detected(self):
        vecs = sign_pattern_family(2)
        cert = certify_separation(vecs, F(-1), F(2))
        bad = dict(cert.witnesses)
        w = bad[1]
        bad[1] = SignedCoordinate(w.pos, w.label, -w.eps)
        tampered = SeparationCertificate(
            r=cert.r, delta=cert.delta, K=cert.K,
            member_labels=cert.member_labels, witnesses=bad,
        )
        with pytest.raises(VerificationError):
            validate_certificate(tampered, vecs)

    def test_wrong_K_detected(self):
        vecs = sign_pattern_family(2)
        cert = certify_separation(vecs, F(-1), F(2))
        wrong = SeparationCertificate(
            r=cert.r, delta=cert.delta, K=cert.K + 1,
            member_labels=cert.member_labels, witnesses=dict(cert.witnesses),
        )
        with pytest.raises(VerificationError, match="K mismatch"):
            validate_certificate(wrong, vecs)

    def test_missing_subset_detected(self):
        vecs = sign_pattern_family(2)
        cert = certify_separation(vecs, F(-1), F(2))
        partial = dict(cert.witnesses)
        del partial[3]
        broken = SeparationCertificate(
            r=cert.r, delta=cert.delta, K=cert.K,
            member_labels=cert.member_labels, witnesses=partial,
        )
        with pytest.raises(VerificationError, match="every subset"):
            validate_certificate(broken, vecs)


class TestGridOracle:
    def test_sign_pattern(self):
        lo, hi = lower_constant_grid(sign_pattern_family(3), 12)
        assert hi == 1
        assert lo == F(1, 2)

    def test_single_vector(self):
        v = SupVector.from_fractions([F(2), F(0)])
        lo, hi = lower_constant_grid([v], 12)
        assert hi == 2
        assert lo == 2 - F(2 * 2 * 1, 12)
        assert lo <= 2 <= hi

    def test_kuratowski_m4(self):
        sp, _ = build_m_ell1(4)
        pm = kuratowski_embed(sp, "0")
        vecs = [pm.image_vector(str(i)) for i in range(1, 5)]
        lo, hi = lower_constant_grid(vecs, 12)
        assert hi == 1  # lambda = 1, attained at a single basis coefficient
        assert lo == 1 - F(2 * 1 * 4, 12)

    def test_budget_guard(self):
        with pytest.raises(InputError):
            lower_constant_grid(sign_pattern_family(7), 12)
        with pytest.raises(InputError):
            lower_constant_grid(sign_pattern_family(2), 3)


class TestThresholds:
    def test_d_three_halves(self):
        th = thresholds(F(3, 2))
        assert th.c == 5
        assert th.values == (F(-1), F(-1, 2), F(0), F(1, 2), F(1))
        assert th.spacing == F(1, 2)

    def test_d_six_fifths(self):
        th = thresholds(F(6, 5))
        assert th.c == 2
        assert th.values == (F(-2, 5), F(2, 5))

    def test_consecutive_gap_and_range(self):
        for d in (F(6, 5), F(4, 3), F(3, 2), F(9, 5)):
            th = thresholds(d)
            diffs = {b - a for a, b in zip(th.values, th.values[1:])}
            assert diffs == {2 - d}
            assert th.values[0] == 2 - 2 * d > -d
            assert th.values[-1] <= d

    def test_out_of_range_rejected(self):
        for bad in (F(1), F(11, 10), F(2), F(1, 2)):
            with pytest.raises(InputError):
                thresholds(bad)


class TestThm4a:
    @pytest.mark.parametrize("n", [3, 4])
    @pytest.mark.parametrize("d", [F(1), F(6, 5)])
    def test_kuratowski_pipeline(self, n, d):
        sp, _ = build_m_ell1(n)
        res = extract_thm4a(kuratowski_embed(sp, "0"), d)
        assert res.selected == tuple(range(1, n + 1))
        assert res.certificate.delta == 2 * (4 - 3 * d)
        assert certified_lower_constant(res.certificate) == 4 - 3 * d
        assert res.ratio <= d / (4 - 3 * d)
        pm = kuratowski_embed(sp, "0")
        vecs = [pm.image_vector(str(i)) for i in range(1, n + 1)]
        validate_certificate(res.certificate, vecs)

    def test_kuratowski_m4_at_isometry_has_ratio_one(self):
        sp, _ = build_m_ell1(4)
        res = extract_thm4a(kuratowski_embed(sp, "0"), F(1))
        assert res.ratio == 1
        assert len(res.selected) == 4

    def test_scaled_coordinates_within_declared_d(self, rng):
        den = 10
        sp, _ = build_m_ell1(4)
        dim = sp.size
        factors = [den + rng.randrange(0, 3) for _ in range(dim)]  # in [1, 1.2]
        pm = scaled_kuratowski(4, den, factors)
        res = extract_thm4a(pm, F(6, 5))
        assert res.ratio <= F(6, 5) / (4 - 3 * F(6, 5)) == 3

    def test_d_range_enforced(self):
        sp, _ = build_m_ell1(3)
        pm = kuratowski_embed(sp, "0")
        for bad in (F(4, 3), F(2), F(1, 2)):
            with pytest.raises(InputError):
                extract_thm4a(pm, bad)

    def test_violating_map_rejected(self):
        # stretches beyond the declared D = 1 break the full distortion check
        size = build_m_ell1(3)[0].size
        pm = scaled_kuratowski(3, 10, [12] * size)
        with pytest.raises(InputError, match="embedding|distortion"):
            extract_thm4a(pm, F(1))

    def test_in_sweep_check_catches_violations_when_full_check_off(self):
        sp, _ = build_m_ell1(3)
        pm = kuratowski_embed(sp, "0")
        shrunk = PointMap(
            source=sp,
            coord_labels=pm.coord_labels,
            image_num=pm.image_num.astype(np.int64),
            image_den=3,  # contracts everything by 1/3
        )
        with pytest.raises(InputError):
            extract_thm4a(shrunk, F(13, 10), check_distortion=False)

    def test_non_hub_sets_source_rejected(self):
        from l1cert import build_m_r

        pm = kuratowski_embed(build_m_r(4), "0")
        with pytest.raises(InputError):
            extract_thm4a(pm, F(1))


class TestThm4b:
    def test_m11_with_proof_bound(self):
        sp, _ = build_m_ell1(11)
        pm = kuratowski_embed(sp, "0")
        res = extract_thm4b(pm, F(3, 2), F(4, 5), allow_proof_bound=True)
        assert len(res.selected) == 3  # ceil(eta * 11) with eta ~ 0.2209
        assert res.certificate.delta == F(1, 2)
        assert res.ratio <= 6
        assert sum(res.audit["class_sizes"].values()) == 2**11
        assert res.audit["class_sizes"][res.audit["chosen_j"]] >= res.audit["pigeonhole_min"]
        vecs = [pm.image_vector(str(i)) for i in res.selected]
        validate_certificate(res.certificate, vecs)

    def test_statement_bound_enforced_by_default(self):
        sp, _ = build_m_ell1(11)
        pm = kuratowski_embed(sp, "0")
        with pytest.raises(InputError, match="below the required bound"):
            extract_thm4b(pm, F(3, 2), F(4, 5))

    def test_scaled_map_nontrivial_classes(self, rng):
        den = 4
        sp, _ = build_m_ell1(11)
        base = kuratowski_embed(sp, "0")
        factors = [den + rng.randrange(0, den // 2 + 1) for _ in range(sp.size)]  # [1, 3/2]
        pm = PointMap(
            source=sp,
            coord_labels=base.coord_labels,
            image_num=base.image_num.astype(np.int64) * np.asarray(factors, dtype=np.int64),
            image_den=den,
        )
        res = extract_thm4b(pm, F(3, 2), F(4, 5), allow_proof_bound=True, check_distortion=False)
        assert res.ratio <= 6
        vecs = [pm.image_vector(str(i)) for i in res.selected]
        validate_certificate(res.certificate, vecs)

    def test_partition_classes_rebuild_matches_audit(self):
        sp, _ = build_m_ell1(11)
        pm = kuratowski_embed(sp, "0")
        res = extract_thm4b(pm, F(3, 2), F(4, 5), allow_proof_bound=True)
        j = partition_classes(pm, F(3, 2))
        sizes = {jj: int((j == jj).sum()) for jj in range(1, 5)}
        assert sizes == res.audit["class_sizes"]

    def test_parameter_ranges(self):
        sp, _ = build_m_ell1(3)
        pm = kuratowski_embed(sp, "0")
        with pytest.raises(InputError):
            extract_thm4b(pm, F(1), F(4, 5))
        with pytest.raises(InputError):
            extract_thm4b(pm, F(3, 2), F(1))
