"""From daily closing prices to the two positive tail samples.

Input files are UTF-8 CSV with a ``date,close`` header (ISO dates, extra
columns ignored).  Consecutive rows are consecutive trading days; no
calendar or corporate-action adjustment is made.
"""

import csv
from dataclasses import dataclass
import datetime as dt
import math
from pathlib import Path

import numpy as np

from . import kexp
from .exceptions import DegenerateInputError, DomainError, InputError


@dataclass(frozen=True)
class PriceSeries:
    ticker: str
    dates: tuple
    closes: np.ndarray

    def __post_init__(self):
        closes = np.asarray(self.closes, dtype=float)
        if closes.ndim != 1 or closes.size != len(self.dates):
            raise InputError("dates and closes must have the same length")
        if closes.size < 2:
            raise InputError("a price series needs at least 2 rows")
        if not np.all(np.isfinite(closes)) or np.any(closes <= 0):
            raise InputError("closing prices must be finite and > 0")
        if any(b <= a for a, b in zip(self.dates, self.dates[1:])):
            raise InputError("dates must be strictly increasing")
        closes.setflags(write=False)
        object.__setattr__(self, "closes", closes)
        object.__setattr__(self, "dates", tuple(self.dates))

    def __len__(self):
        return self.closes.size


@dataclass(frozen=True)
class ReturnSeries:
    ticker: str
    returns: np.ndarray

    def __len__(self):
        return self.returns.size


@dataclass(frozen=True)
class TailSamples:
    """Negated negative returns, positive returns, count of exact zeros, and q = P(R < 0)."""

    neg: np.ndarray
    pos: np.ndarray
    zero_count: int
    q: float

    @property
    def n(self):
        return self.neg.size + self.pos.size + self.zero_count

    def tail(self, which):
        if which not in ("neg", "pos"):
            raise DomainError("tail must be 'neg' or 'pos'")
        sample = self.neg if which == "neg" else self.pos
        if sample.size == 0:
            raise DegenerateInputError(f"the {which} tail is empty")
        return sample


def load_prices(path, ticker=None):
    """Read a ``date,close`` CSV into a validated, date-sorted :class:`PriceSeries`."""
    path = Path(path)
    if ticker is None:
        ticker = path.stem
    try:
        with path.open(newline="", encoding="utf-8") as fh:
            reader = csv.DictReader(fh)
            if reader.fieldnames is None:
                raise InputError(f"{path}: empty file")
            fields = [f.strip().lower() for f in reader.fieldnames]
            if "date" not in fields or "close" not in fields:
                raise InputError(f"{path}: header must contain 'date' and 'close'")
            date_key = reader.fieldnames[fields.index("date")]
            close_key = reader.fieldnames[fields.index("close")]
            rows = []
            for lineno, row in enumerate(reader, start=2):
                raw_date = (row.get(date_key) or "").strip()
                raw_close = (row.get(close_key) or "").strip()
                try:
                    day = dt.date.fromisoformat(raw_date)
                except ValueError:
                    raise InputError(f"{path}:{lineno}: bad date {raw_date!r}") from None
                if not raw_close:
                    raise InputError(f"{path}:{lineno}: empty close")
                try:
                    close = float(raw_close)
                except ValueError:
                    raise InputError(f"{path}:{lineno}: bad close {raw_close!r}") from None
                if not (math.isfinite(close) and close > 0):
                    raise InputError(f"{path}:{lineno}: close must be a positive number")
                rows.append((day, close))
    except OSError as exc:
        raise InputError(f"{path}: {exc}") from exc
    except UnicodeDecodeError as exc:
        raise InputError(f"{path}: not valid UTF-8") from exc
    if not rows:
        raise InputError(f"{path}: no data rows")
    rows.sort(key=lambda r: r[0])
    dates = [r[0] for r in rows]
    for a, b in zip(dates, dates[1:]):
        if a == b:
            raise InputError(f"{path}: duplicate date {a.isoformat()}")
    return PriceSeries(ticker, tuple(dates), np.array([r[1] for r in rows]))


def compute_returns(ps):
    """Daily log returns ``R_i = log(S_i / S_{i-1})``."""
    closes = ps.closes
    returns = np.log(closes[1:] / closes[:-1])
    return ReturnSeries(ps.ticker, returns)


def reconstruct_prices(first_close, returns):
    """Inverse of :func:`compute_returns`: ``S_i = S_0 exp(R_1 + ... + R_i)``."""
    return first_close * np.exp(np.concatenate([[0.0], np.cumsum(returns)]))


def split_tails(rs):
    """Split returns into ``-R`` for ``R < 0`` and ``R`` for ``R > 0``.

    Exact zeros belong to neither tail but stay in the denominator of ``q``.
    Empty tails are allowed here; :meth:`TailSamples.tail` raises when an
    empty one is requested for fitting.
    """
    r = np.asarray(rs.returns if isinstance(rs, ReturnSeries) else rs, dtype=float)
    if r.size == 0:
        raise DegenerateInputError("no returns")
    neg = -r[r < 0]
    pos = r[r > 0]
    zero_count = int(np.count_nonzero(r == 0))
    if neg.size + pos.size == 0:
        raise DegenerateInputError("all returns are zero")
    return TailSamples(neg=neg, pos=pos, zero_count=zero_count, q=neg.size / r.size)


def composite_tail(r, q, neg, pos, zero_mass=0.0):
    """Two-tail model probability: ``P(R < r)`` for r < 0, ``P(R > r)`` for r > 0.

    The upper tail carries weight ``1 - q - zero_mass``; with no exact zero
    returns this is the usual ``1 - q``.
    """
    if not (0.0 <= q <= 1.0 and 0.0 <= zero_mass <= 1.0 - q):
        raise DomainError("need 0 <= q and 0 <= zero_mass <= 1 - q")
    r = np.asarray(r, dtype=float)
    if np.any(r == 0) or not np.all(np.isfinite(r)):
        raise DomainError("composite tail is defined for finite r != 0")
    out = np.empty(r.shape)
    lower = r < 0
    if np.any(lower):
        out[lower] = q * kexp.survival(-r[lower], neg)
    if np.any(~lower):
        out[~lower] = (1.0 - q - zero_mass) * kexp.survival(r[~lower], pos)
    if out.ndim == 0:
        return float(out)
    return out


def composite_sf(r, q, neg, pos, zero_mass=0.0):
    """Upper tail ``P(R > r)`` of the two-tail model on the whole real line.

    ``zero_mass`` is the probability of an exact zero return, so the model
    places ``q`` below zero, ``zero_mass`` at zero and ``1 - q - zero_mass``
    above.
    """
    r = np.asarray(r, dtype=float)
    out = np.empty(r.shape)
    lower = r < 0
    upper = r > 0
    zero = ~(lower | upper)
    if np.any(lower):
        out[lower] = 1.0 - q * kexp.survival(-r[lower], neg)
    if np.any(upper):
        out[upper] = (1.0 - q - zero_mass) * kexp.survival(r[upper], pos)
    out[zero] = 1.0 - q - zero_mass
    return out


def composite_sf_left(r, q, neg, pos, zero_mass=0.0):
    """``P(R >= r)``; differs from :func:`composite_sf` only at r = 0."""
    r = np.asarray(r, dtype=float)
    out = composite_sf(r, q, neg, pos, zero_mass)
    out[r == 0] = 1.0 - q
    return out
