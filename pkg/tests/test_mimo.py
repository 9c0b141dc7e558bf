import numpy as np
import pytest

from qwsnsim.channel import TrsGain
from qwsnsim.errors import EmptyUserSetError, NotHermitianError, NotPositiveDefiniteError
from qwsnsim.mimo import (
    MimoChannel,
    hermitian_logdet,
    mimo_capacity,
    mimo_capacity_trs,
    multiuser_mimo_total,
)

from oracles import eigen_log2det, random_hermitian_pd, random_unitary


class TestHermitianLogdet:
    def test_identity(self):
        assert hermitian_logdet(np.eye(3)) == 0.0

    def test_scaled_identity(self):
        assert hermitian_logdet(2.0 * np.eye(2)) == 2.0

    def test_matches_eigenvalue_oracle(self):
        rng = np.random.default_rng(21)
        for _ in range(100):
            n = int(rng.integers(1, 9))
            a = random_hermitian_pd(rng, n)
            assert hermitian_logdet(a) == pytest.approx(eigen_log2det(a), rel=1e-9)

    def test_rejects_non_hermitian(self):
        a = np.array([[1.0, 2.0], [0.0, 1.0]])
        with pytest.raises(NotHermitianError):
            hermitian_logdet(a)

    def test_rejects_indefinite(self):
        a = np.diag([1.0, -1.0])
        with pytest.raises(NotPositiveDefiniteError):
            hermitian_logdet(a)

    def test_rejects_singular(self):
        with pytest.raises(NotPositiveDefiniteError):
            hermitian_logdet(np.diag([1.0, 0.0]))

    def test_rejects_non_square(self):
        with pytest.raises(ValueError):
            hermitian_logdet(np.ones((2, 3)))

    def test_rejects_oversized(self):
        with pytest.raises(ValueError):
            hermitian_logdet(np.eye(65))


class TestMimoCapacity:
    def test_siso_unit(self):
        assert mimo_capacity(MimoChannel(np.array([[1.0]]), 1.0)) == 1.0

    def test_identity_channel(self):
        assert mimo_capacity(MimoChannel(np.eye(2), 2.0)) == 2.0

    def test_diagonal_channel_decomposes_into_siso_sum(self):
        rng = np.random.default_rng(13)
        for _ in range(50):
            a, b = rng.uniform(0.2, 3.0, size=2)
            p = float(rng.uniform(0.1, 10.0))
            ch = MimoChannel(np.diag([a, b]).astype(complex), p)
            expected = np.log2(1 + p * a * a / 2) + np.log2(1 + p * b * b / 2)
            assert mimo_capacity(ch) == pytest.approx(float(expected), abs=1e-10, rel=1e-10)

    def test_unit_gain_is_plain_capacity(self):
        rng = np.random.default_rng(17)
        h = rng.standard_normal((3, 2)) + 1j * rng.standard_normal((3, 2))
        ch = MimoChannel(h, 1.7)
        assert mimo_capacity_trs(ch, TrsGain(1.0)) == mimo_capacity(ch)

    def test_trs_identity_channel(self):
        assert mimo_capacity_trs(MimoChannel(np.eye(2), 2.0), TrsGain(3.0)) == 4.0

    def test_gain_never_decreases_capacity(self):
        rng = np.random.default_rng(19)
        for _ in range(200):
            n_r, n_t = rng.integers(1, 5, size=2)
            h = rng.standard_normal((n_r, n_t)) + 1j * rng.standard_normal((n_r, n_t))
            ch = MimoChannel(h, float(rng.uniform(0.1, 5.0)))
            previous = mimo_capacity(ch)
            for gamma in (1.5, 2.0, 4.0):
                current = mimo_capacity_trs(ch, TrsGain(gamma))
                assert current >= previous - 1e-12
                previous = current

    def test_trs_capacity_matches_eigen_oracle(self):
        rng = np.random.default_rng(23)
        h = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
        ch = MimoChannel(h, 1.3)
        gamma = 2.5
        arg = np.eye(2) + gamma * (1.3 / 2) * (h @ h.conj().T)
        assert mimo_capacity_trs(ch, TrsGain(gamma)) == pytest.approx(
            eigen_log2det(arg), rel=1e-9
        )

    def test_unitary_invariance(self):
        rng = np.random.default_rng(29)
        for _ in range(20):
            h = rng.standard_normal((4, 3)) + 1j * rng.standard_normal((4, 3))
            u = random_unitary(rng, 4)
            v = random_unitary(rng, 3)
            ch = MimoChannel(h, 2.1)
            rotated = MimoChannel(u @ h @ v, 2.1)
            assert mimo_capacity(rotated) == pytest.approx(mimo_capacity(ch), rel=1e-9)

    def test_channel_validation(self):
        with pytest.raises(ValueError):
            MimoChannel(np.ones((2, 2)), -1.0)
        with pytest.raises(ValueError):
            MimoChannel(np.ones(3), 1.0)
        with pytest.raises(ValueError):
            MimoChannel(np.ones((65, 2)), 1.0)
        with pytest.raises(ValueError):
            MimoChannel(np.array([[np.nan]]), 1.0)


class TestMultiuser:
    def test_single_user(self):
        ch = MimoChannel(np.eye(2), 2.0)
        gain = TrsGain(3.0)
        assert multiuser_mimo_total([ch], gain) == mimo_capacity_trs(ch, gain)

    def test_two_identical_users_double(self):
        ch = MimoChannel(np.eye(2), 2.0)
        gain = TrsGain(2.0)
        assert multiuser_mimo_total([ch, ch], gain) == 2 * mimo_capacity_trs(ch, gain)

    def test_three_random_users_match_per_user_oracle(self):
        rng = np.random.default_rng(31)
        gain = TrsGain(1.8)
        channels = []
        expected = 0.0
        for _ in range(3):
            h = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
            p = float(rng.uniform(0.5, 3.0))
            channels.append(MimoChannel(h, p))
            expected += eigen_log2det(np.eye(2) + gain.gamma * (p / 2) * (h @ h.conj().T))
        assert multiuser_mimo_total(channels, gain) == pytest.approx(expected, rel=1e-9)

    def test_empty_user_set(self):
        with pytest.raises(EmptyUserSetError):
            multiuser_mimo_total([], TrsGain(1.0))
