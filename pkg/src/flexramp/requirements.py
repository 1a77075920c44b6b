"""Net-load uncertainty envelopes and ramping-capability requirements.

A net-load profile carries an hourly forecast, a fifteen-minute forecast
(four quarters per hour), and the forecast-error standard deviation per
hour.  Requirements are movements between a period's forecast and the
uncertainty envelope of the following period: the upward requirement for a
period is the climb from its forecast to the next period's upper envelope
(floored at zero), and the downward requirement is the drop to the next
period's lower envelope.  Quarter requirements in the last quarter of an
hour cross into the first quarter of the following hour.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field

import numpy as np

from .errors import ParseError, ValidationError

DEFAULT_Z = 1.96
DEFAULT_SIGMA_FRACTION = 0.05
TERMINAL_RULES = ("zero", "repeat")


@dataclass
class NetLoadProfile:
    """Hourly and quarter-resolution net-load forecast with uncertainty.

    ``sigma_hourly`` is the standard deviation of the hourly forecast
    error; the quarter-resolution deviation is taken as half of it.
    """

    hourly: np.ndarray          # (T,) MW
    quarter: np.ndarray         # (T, 4) MW
    sigma_hourly: np.ndarray    # (T,) MW
    z: float = DEFAULT_Z
    name: str = ""

    def __post_init__(self):
        self.hourly = np.asarray(self.hourly, dtype=float)
        self.quarter = np.asarray(self.quarter, dtype=float)
        self.sigma_hourly = np.asarray(self.sigma_hourly, dtype=float)
        t = self.hourly.shape[0]
        if t == 0:
            raise ValidationError("net-load profile is empty")
        if self.quarter.shape != (t, 4):
            raise ValidationError(
                f"quarter table shape {self.quarter.shape} does not match {t} hours")
        if self.sigma_hourly.shape != (t,):
            raise ValidationError("sigma_hourly length does not match the hourly profile")
        if (self.sigma_hourly < 0).any():
            bad = int(np.argmin(self.sigma_hourly)) + 1
            raise ValidationError(f"sigma_hourly must be >= 0 (hour {bad})")
        if self.z < 0:
            raise ValidationError("z must be >= 0")

    @property
    def n_hours(self) -> int:
        return self.hourly.shape[0]

    @property
    def sigma_15(self) -> np.ndarray:
        return self.sigma_hourly / 2.0

    @classmethod
    def from_hourly(cls, hourly, sigma_hourly=None, z=DEFAULT_Z,
                    sigma_fraction=DEFAULT_SIGMA_FRACTION, name=""):
        """Profile with flat quarters when only hourly data is available."""
        hourly = np.asarray(hourly, dtype=float)
        if sigma_hourly is None:
            sigma_hourly = sigma_fraction * hourly
        quarter = np.repeat(hourly[:, None], 4, axis=1)
        return cls(hourly=hourly, quarter=quarter, sigma_hourly=sigma_hourly,
                   z=z, name=name)

    @classmethod
    def from_quarters(cls, quarter, sigma_hourly=None, z=DEFAULT_Z,
                      sigma_fraction=DEFAULT_SIGMA_FRACTION, name=""):
        """Profile whose hourly forecast is the mean of its four quarters."""
        quarter = np.asarray(quarter, dtype=float)
        hourly = quarter.mean(axis=1)
        if sigma_hourly is None:
            sigma_hourly = sigma_fraction * hourly
        return cls(hourly=hourly, quarter=quarter, sigma_hourly=sigma_hourly,
                   z=z, name=name)

    def with_sigma_fraction(self, fraction: float) -> "NetLoadProfile":
        return NetLoadProfile(hourly=self.hourly, quarter=self.quarter,
                              sigma_hourly=fraction * self.hourly,
                              z=self.z, name=self.name)

    def scaled(self, factor: float) -> "NetLoadProfile":
        return NetLoadProfile(hourly=factor * self.hourly,
                              quarter=factor * self.quarter,
                              sigma_hourly=factor * self.sigma_hourly,
                              z=self.z, name=self.name)


def load_profile_csv(path, z=DEFAULT_Z,
                     sigma_fraction=DEFAULT_SIGMA_FRACTION) -> NetLoadProfile:
    """Read a net-load CSV.

    Columns: ``hour`` plus either ``net_load`` (hourly forecast), or
    ``q1..q4`` (quarter forecasts), or both.  Optional ``sigma`` column;
    when absent, sigma defaults to ``sigma_fraction`` of the hourly
    forecast.  Rows must be hours 1..T in order.  Lines starting with
    ``#`` are ignored.
    """
    try:
        with open(path, newline="") as fh:
            rows = [r for r in csv.reader(fh)
                    if r and not r[0].lstrip().startswith("#")]
    except OSError as exc:
        raise ParseError(f"cannot read profile {path}: {exc}") from exc
    if not rows:
        raise ParseError(f"profile {path} is empty")
    header = [h.strip().lower() for h in rows[0]]
    if "hour" not in header:
        raise ParseError(f"profile {path}: missing 'hour' column")
    col = {h: i for i, h in enumerate(header)}
    has_hourly = "net_load" in col
    has_quarters = all(f"q{i}" in col for i in (1, 2, 3, 4))
    if not has_hourly and not has_quarters:
        raise ParseError(f"profile {path}: need a net_load column or q1..q4 columns")

    hourly, quarters, sigmas = [], [], []
    for lineno, row in enumerate(rows[1:], start=2):
        try:
            hour = int(row[col["hour"]])
            if hour != lineno - 1:
                raise ParseError(
                    f"profile {path}: line {lineno} is hour {hour}, expected {lineno - 1}")
            if has_quarters:
                q = [float(row[col[f"q{i}"]]) for i in (1, 2, 3, 4)]
                quarters.append(q)
            if has_hourly:
                hourly.append(float(row[col["net_load"]]))
            if "sigma" in col:
                sigmas.append(float(row[col["sigma"]]))
        except (ValueError, IndexError) as exc:
            raise ParseError(f"profile {path}: line {lineno}: {exc}") from exc

    if has_quarters:
        quarter = np.array(quarters)
        hr = np.array(hourly) if has_hourly else quarter.mean(axis=1)
    else:
        hr = np.array(hourly)
        quarter = np.repeat(hr[:, None], 4, axis=1)
    sigma = np.array(sigmas) if sigmas else sigma_fraction * hr
    return NetLoadProfile(hourly=hr, quarter=quarter, sigma_hourly=sigma,
                          z=z, name=str(path))


# -- envelopes ---------------------------------------------------------------

def envelope_upper(values, sigma, z) -> np.ndarray:
    """Upper uncertainty envelope: forecast + z * sigma."""
    return np.asarray(values, dtype=float) + z * np.asarray(sigma, dtype=float)


def envelope_lower(values, sigma, z) -> np.ndarray:
    """Lower uncertainty envelope: forecast - z * sigma."""
    return np.asarray(values, dtype=float) - z * np.asarray(sigma, dtype=float)


# -- hourly requirements -----------------------------------------------------

def _check_terminal(terminal: str) -> None:
    if terminal not in TERMINAL_RULES:
        raise ValidationError(
            f"terminal rule {terminal!r} not one of {TERMINAL_RULES}")


def hourly_up_requirement(profile: NetLoadProfile, terminal="zero") -> np.ndarray:
    """Upward hourly requirement: climb from each hour's forecast to the
    next hour's upper envelope, floored at zero.

    The final hour has no successor; ``terminal='zero'`` sets its
    requirement to zero, ``terminal='repeat'`` copies the previous hour's
    requirement forward.
    """
    _check_terminal(terminal)
    t = profile.n_hours
    req = np.zeros(t)
    nxt = profile.hourly[1:] + profile.z * profile.sigma_hourly[1:]
    req[:t - 1] = np.maximum(nxt - profile.hourly[:t - 1], 0.0)
    if terminal == "repeat" and t > 1:
        req[t - 1] = req[t - 2]
    return req


def hourly_down_requirement(profile: NetLoadProfile, terminal="zero") -> np.ndarray:
    """Downward hourly requirement: drop from each hour's forecast to the
    next hour's lower envelope, floored at zero."""
    _check_terminal(terminal)
    t = profile.n_hours
    req = np.zeros(t)
    nxt = profile.hourly[1:] - profile.z * profile.sigma_hourly[1:]
    req[:t - 1] = np.maximum(profile.hourly[:t - 1] - nxt, 0.0)
    if terminal == "repeat" and t > 1:
        req[t - 1] = req[t - 2]
    return req


# -- intra-hour requirements -------------------------------------------------

def intra_hour_up_requirements(profile: NetLoadProfile, terminal="zero") -> np.ndarray:
    """Per-quarter upward requirements, shape (T, 4).

    Quarters one through three target the upper envelope of the next
    quarter in the same hour; the fourth quarter targets the first quarter
    of the following hour, with that hour's quarter-resolution sigma.
    """
    _check_terminal(terminal)
    t = profile.n_hours
    s15 = profile.sigma_15
    z = profile.z
    req = np.zeros((t, 4))
    # within-hour steps share the hour's sigma
    nxt = profile.quarter[:, 1:] + z * s15[:, None]
    req[:, :3] = np.maximum(nxt - profile.quarter[:, :3], 0.0)
    # hour-crossing step: envelope belongs to the target hour
    cross = profile.quarter[1:, 0] + z * s15[1:]
    req[:t - 1, 3] = np.maximum(cross - profile.quarter[:t - 1, 3], 0.0)
    if terminal == "repeat" and t > 1:
        req[t - 1, 3] = req[t - 2, 3]
    return req


def intra_hour_down_requirements(profile: NetLoadProfile, terminal="zero") -> np.ndarray:
    """Per-quarter downward requirements, shape (T, 4)."""
    _check_terminal(terminal)
    t = profile.n_hours
    s15 = profile.sigma_15
    z = profile.z
    req = np.zeros((t, 4))
    nxt = profile.quarter[:, 1:] - z * s15[:, None]
    req[:, :3] = np.maximum(profile.quarter[:, :3] - nxt, 0.0)
    cross = profile.quarter[1:, 0] - z * s15[1:]
    req[:t - 1, 3] = np.maximum(profile.quarter[:t - 1, 3] - cross, 0.0)
    if terminal == "repeat" and t > 1:
        req[t - 1, 3] = req[t - 2, 3]
    return req


def intra_hour_rhs(per_quarter: np.ndarray) -> np.ndarray:
    """Hourly intra-hour procurement target: the worst quarter of each hour."""
    per_quarter = np.asarray(per_quarter, dtype=float)
    return per_quarter.max(axis=1)


# -- bundle ------------------------------------------------------------------

@dataclass
class RampRequirements:
    """All requirement series for one profile, hourly axis first."""

    hourly_up: np.ndarray       # (T,)
    hourly_down: np.ndarray     # (T,)
    quarter_up: np.ndarray      # (T, 4)
    quarter_down: np.ndarray    # (T, 4)
    intra_up: np.ndarray        # (T,)  max of quarter_up per hour
    intra_down: np.ndarray      # (T,)
    terminal: str = "zero"

    @property
    def n_hours(self) -> int:
        return self.hourly_up.shape[0]


def compute_requirements(profile: NetLoadProfile, terminal="zero") -> RampRequirements:
    qu = intra_hour_up_requirements(profile, terminal)
    qd = intra_hour_down_requirements(profile, terminal)
    return RampRequirements(
        hourly_up=hourly_up_requirement(profile, terminal),
        hourly_down=hourly_down_requirement(profile, terminal),
        quarter_up=qu,
        quarter_down=qd,
        intra_up=intra_hour_rhs(qu),
        intra_down=intra_hour_rhs(qd),
        terminal=terminal,
    )
