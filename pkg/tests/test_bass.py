import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from normsim import BassParams, IdentifiabilityError, InputError, bass_step, bass_trajectory, fit_bass


def test_params_validation():
    with pytest.raises(InputError):
        BassParams(-0.1, 0.2)
    with pytest.raises(InputError):
        BassParams(0.6, 0.6)
    BassParams(0.0, 0.0)


def test_step_fixed_point_at_one():
    assert bass_step(1.0, BassParams(0.3, 0.5)) == 1.0


def test_step_from_zero():
    assert bass_step(0.0, BassParams(0.001, 0.1)) == pytest.approx(0.001, abs=1e-15)


def test_step_hand_value():
    # 0.5 + 0.001*0.5 + 0.01*0.25
    assert bass_step(0.5, BassParams(0.001, 0.01)) == pytest.approx(0.503, abs=1e-12)


def test_step_domain_error():
    with pytest.raises(InputError):
        bass_step(1.2, BassParams(0.1, 0.1))
    with pytest.raises(InputError):
        bass_step(-0.01, BassParams(0.1, 0.1))


@given(
    z=st.floats(0.0, 1.0),
    p=st.floats(0.0, 0.5),
    q=st.floats(0.0, 0.5),
)
@settings(max_examples=200)
def test_step_monotone_and_bounded(z, p, q):
    out = bass_step(z, BassParams(p, q))
    assert out >= z
    assert 0.0 <= out <= 1.0


def test_trajectory_constant_at_one():
    z = bass_trajectory(1.0, BassParams(0.2, 0.3), 10)
    assert np.all(z == 1.0)


def test_trajectory_monotone_approaches_one():
    z = bass_trajectory(0.0, BassParams(0.001, 0.01), 3000)
    assert np.all(np.diff(z) >= 0)
    assert z[-1] > 0.99


def test_steeper_curve_reaches_half_earlier():
    slow = bass_trajectory(0.0, BassParams(0.001, 0.01), 3000)
    fast = bass_trajectory(0.0, BassParams(0.001, 0.1), 3000)
    t_slow = int(np.argmax(slow >= 0.5))
    t_fast = int(np.argmax(fast >= 0.5))
    assert 0 < t_fast < t_slow


def test_fit_noiseless_roundtrip():
    series = bass_trajectory(0.01, BassParams(0.001, 0.1), 200)
    report = fit_bass(series)
    assert report.params["p"] == pytest.approx(0.001, abs=1e-9)
    assert report.params["q"] == pytest.approx(0.1, abs=1e-9)
    assert report.objective < 1e-20


def test_fit_pure_innovation():
    series = bass_trajectory(0.0, BassParams(0.02, 0.0), 120)
    report = fit_bass(series)
    assert report.params["q"] == pytest.approx(0.0, abs=1e-9)
    assert report.params["p"] == pytest.approx(0.02, abs=1e-9)


def test_fit_constant_series_identifiability_error():
    with pytest.raises(IdentifiabilityError):
        fit_bass([0.5, 0.5, 0.5, 0.5])


def test_fit_all_boundary_identifiability_error():
    with pytest.raises(IdentifiabilityError):
        fit_bass([0.0, 0.0, 1.0, 1.0, 1.0])


def test_fit_short_series_rejected():
    with pytest.raises(InputError):
        fit_bass([0.1, 0.2, 0.3])


def test_fit_noisy_recovery():
    rng = np.random.default_rng(4)
    series = bass_trajectory(0.01, BassParams(0.001, 0.1), 200)
    noisy = np.clip(series + rng.uniform(-1e-3, 1e-3, size=len(series)), 0.0, 1.0)
    report = fit_bass(noisy)
    assert report.params["p"] == pytest.approx(0.001, abs=1e-2)
    assert report.params["q"] == pytest.approx(0.1, abs=1e-2)


def test_second_difference_sign_changes_once():
    z = bass_trajectory(0.0, BassParams(0.001, 0.1), 400)
    d2 = np.diff(z, 2)
    signs = np.sign(d2[np.abs(d2) > 1e-12])
    changes = int(np.count_nonzero(np.diff(signs) != 0))
    assert changes == 1
