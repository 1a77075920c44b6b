import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from flexramp.errors import ParseError, ValidationError
from flexramp.requirements import (DEFAULT_Z, NetLoadProfile, compute_requirements,
                                   envelope_lower, envelope_upper,
                                   hourly_down_requirement, hourly_up_requirement,
                                   intra_hour_down_requirements, intra_hour_rhs,
                                   intra_hour_up_requirements, load_profile_csv)


# -- independent oracle: plain-Python, scalar, from first principles -------------

def oracle_hourly(profile, direction, terminal):
    t_n = profile.hourly.size
    req = [0.0] * t_n
    for t in range(t_n - 1):
        if direction == "up":
            need = (profile.hourly[t + 1] + profile.z * profile.sigma_hourly[t + 1]
                    - profile.hourly[t])
        else:
            need = (profile.hourly[t]
                    - (profile.hourly[t + 1] - profile.z * profile.sigma_hourly[t + 1]))
        req[t] = max(need, 0.0)
    if terminal == "repeat" and t_n > 1:
        req[t_n - 1] = req[t_n - 2]
    return np.array(req)


def oracle_intra(profile, direction, terminal):
    t_n = profile.hourly.size
    s15 = profile.sigma_hourly / 2.0
    req = np.zeros((t_n, 4))
    for t in range(t_n):
        for q in range(4):
            if q < 3:
                target, sig = profile.quarter[t, q + 1], s15[t]
            elif t + 1 < t_n:
                target, sig = profile.quarter[t + 1, 0], s15[t + 1]
            else:
                if terminal == "repeat" and t > 0:
                    req[t, 3] = req[t - 1, 3]
                continue
            if direction == "up":
                need = target + profile.z * sig - profile.quarter[t, q]
            else:
                need = profile.quarter[t, q] - (target - profile.z * sig)
            req[t, q] = max(need, 0.0)
    return req


def random_profile(rng, hours=None, z=None):
    t_n = hours or int(rng.integers(2, 12))
    quarter = rng.uniform(20.0, 200.0, (t_n, 4))
    return NetLoadProfile(hourly=quarter.mean(axis=1), quarter=quarter,
                          sigma_hourly=rng.uniform(0.0, 15.0, t_n),
                          z=z if z is not None else float(rng.uniform(0.5, 3.0)))


def test_oracle_agreement_1000_random_profiles():
    rng = np.random.default_rng(4242)
    for k in range(1000):
        terminal = "repeat" if k % 2 else "zero"
        prof = random_profile(rng)
        assert np.array_equal(hourly_up_requirement(prof, terminal),
                              oracle_hourly(prof, "up", terminal))
        assert np.array_equal(hourly_down_requirement(prof, terminal),
                              oracle_hourly(prof, "down", terminal))
        assert np.array_equal(intra_hour_up_requirements(prof, terminal),
                              oracle_intra(prof, "up", terminal))
        assert np.array_equal(intra_hour_down_requirements(prof, terminal),
                              oracle_intra(prof, "down", terminal))


@settings(max_examples=60, deadline=None)
@given(seed=st.integers(0, 10_000))
def test_requirements_nonnegative(seed):
    prof = random_profile(np.random.default_rng(seed))
    reqs = compute_requirements(prof)
    for arr in (reqs.hourly_up, reqs.hourly_down, reqs.quarter_up,
                reqs.quarter_down, reqs.intra_up, reqs.intra_down):
        assert (arr >= 0.0).all()


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 10_000),
       z_lo=st.floats(0.0, 2.0), dz=st.floats(0.0, 3.0))
def test_z_monotonicity(seed, z_lo, dz):
    rng = np.random.default_rng(seed)
    quarter = rng.uniform(20.0, 200.0, (6, 4))
    sigma = rng.uniform(0.0, 15.0, 6)
    lo = NetLoadProfile(hourly=quarter.mean(axis=1), quarter=quarter,
                        sigma_hourly=sigma, z=z_lo)
    hi = NetLoadProfile(hourly=quarter.mean(axis=1), quarter=quarter,
                        sigma_hourly=sigma, z=z_lo + dz)
    r_lo, r_hi = compute_requirements(lo), compute_requirements(hi)
    assert (r_hi.hourly_up >= r_lo.hourly_up - 1e-12).all()
    assert (r_hi.hourly_down >= r_lo.hourly_down - 1e-12).all()
    assert (r_hi.intra_up >= r_lo.intra_up - 1e-12).all()
    assert (r_hi.intra_down >= r_lo.intra_down - 1e-12).all()


def test_zero_sigma_reduces_to_deltas():
    hourly = np.array([100.0, 130.0, 90.0, 90.0])
    prof = NetLoadProfile(hourly=hourly,
                          quarter=np.repeat(hourly[:, None], 4, axis=1),
                          sigma_hourly=np.zeros(4))
    up = hourly_up_requirement(prof)
    dn = hourly_down_requirement(prof)
    assert np.array_equal(up, [30.0, 0.0, 0.0, 0.0])
    assert np.array_equal(dn, [0.0, 40.0, 0.0, 0.0])


def test_terminal_rules():
    rng = np.random.default_rng(9)
    prof = random_profile(rng, hours=5)
    up_zero = hourly_up_requirement(prof, "zero")
    up_rep = hourly_up_requirement(prof, "repeat")
    assert up_zero[-1] == 0.0
    assert up_rep[-1] == up_rep[-2]
    assert np.array_equal(up_zero[:-1], up_rep[:-1])
    iu = intra_hour_up_requirements(prof, "repeat")
    assert iu[-1, 3] == iu[-2, 3]
    with pytest.raises(ValidationError, match="terminal"):
        hourly_up_requirement(prof, "extrapolate")


def test_sigma15_and_envelopes():
    prof = random_profile(np.random.default_rng(3), hours=4)
    assert np.array_equal(prof.sigma_15, prof.sigma_hourly / 2.0)
    vals = np.array([10.0, 20.0])
    sig = np.array([1.0, 2.0])
    assert np.array_equal(envelope_upper(vals, sig, 2.0), [12.0, 24.0])
    assert np.array_equal(envelope_lower(vals, sig, 2.0), [8.0, 16.0])


def test_intra_rhs_is_quarter_max():
    per_q = np.array([[1.0, 4.0, 2.0, 0.0], [5.0, 5.0, 5.0, 5.0]])
    assert np.array_equal(intra_hour_rhs(per_q), [4.0, 5.0])


def test_requirements_bundle_consistency():
    prof = random_profile(np.random.default_rng(12))
    reqs = compute_requirements(prof, terminal="repeat")
    assert np.array_equal(reqs.intra_up, intra_hour_rhs(reqs.quarter_up))
    assert np.array_equal(reqs.hourly_up, hourly_up_requirement(prof, "repeat"))
    assert reqs.terminal == "repeat"
    assert reqs.n_hours == prof.hourly.size


def test_profile_validation():
    with pytest.raises(ValidationError):
        NetLoadProfile(hourly=np.array([1.0, 2.0]),
                       quarter=np.ones((3, 4)), sigma_hourly=np.ones(2))
    with pytest.raises(ValidationError):
        NetLoadProfile(hourly=np.array([1.0]), quarter=np.ones((1, 4)),
                       sigma_hourly=np.array([-1.0]))
    with pytest.raises(ValidationError):
        NetLoadProfile(hourly=np.array([1.0]), quarter=np.ones((1, 4)),
                       sigma_hourly=np.array([1.0]), z=-0.5)


def test_profile_constructors():
    hourly = np.array([50.0, 60.0])
    p = NetLoadProfile.from_hourly(hourly, sigma_fraction=0.1)
    assert np.array_equal(p.quarter, [[50.0] * 4, [60.0] * 4])
    assert np.array_equal(p.sigma_hourly, [5.0, 6.0])

    q = np.array([[40.0, 50.0, 60.0, 50.0], [60.0, 60.0, 60.0, 60.0]])
    p2 = NetLoadProfile.from_quarters(q, sigma_hourly=np.array([1.0, 2.0]))
    assert np.array_equal(p2.hourly, [50.0, 60.0])

    p3 = p2.with_sigma_fraction(0.02)
    assert np.array_equal(p3.sigma_hourly, 0.02 * p2.hourly)
    p4 = p2.scaled(2.0)
    assert np.array_equal(p4.hourly, [100.0, 120.0])
    assert np.array_equal(p4.sigma_hourly, [2.0, 4.0])


# -- CSV loader -------------------------------------------------------------------

def write(tmp_path, text):
    p = tmp_path / "prof.csv"
    p.write_text(text)
    return p


def test_csv_hourly_only(tmp_path):
    p = write(tmp_path, "hour,net_load\n1,100\n2,120\n")
    prof = load_profile_csv(p, sigma_fraction=0.1)
    assert np.array_equal(prof.hourly, [100.0, 120.0])
    assert np.array_equal(prof.quarter[0], [100.0] * 4)
    assert np.array_equal(prof.sigma_hourly, [10.0, 12.0])
    assert prof.z == DEFAULT_Z


def test_csv_quarters_and_sigma(tmp_path):
    p = write(tmp_path, "# comment line\nhour,q1,q2,q3,q4,sigma\n"
                        "1,90,100,110,100,3\n2,120,120,120,120,4\n")
    prof = load_profile_csv(p)
    assert np.array_equal(prof.hourly, [100.0, 120.0])
    assert np.array_equal(prof.sigma_hourly, [3.0, 4.0])


def test_csv_both_columns_keeps_forecast(tmp_path):
    p = write(tmp_path, "hour,net_load,q1,q2,q3,q4\n1,99,90,100,110,100\n")
    prof = load_profile_csv(p)
    assert prof.hourly[0] == 99.0


def test_csv_errors(tmp_path):
    with pytest.raises(ParseError, match="missing 'hour'"):
        load_profile_csv(write(tmp_path, "h,net_load\n1,5\n"))
    with pytest.raises(ParseError, match="net_load column or q1..q4"):
        load_profile_csv(write(tmp_path, "hour,load\n1,5\n"))
    with pytest.raises(ParseError, match="expected 1"):
        load_profile_csv(write(tmp_path, "hour,net_load\n2,5\n"))
    with pytest.raises(ParseError, match="line 3"):
        load_profile_csv(write(tmp_path, "hour,net_load\n1,5\n2,abc\n"))
    with pytest.raises(ParseError, match="empty"):
        load_profile_csv(write(tmp_path, ""))
    with pytest.raises(ParseError, match="cannot read"):
        load_profile_csv(tmp_path / "nope.csv")
