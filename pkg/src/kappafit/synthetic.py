"""Synthetic price series with known return laws, and the bundled fixture set."""

import csv
import datetime as dt
import json
from pathlib import Path

import numpy as np

from . import kexp
from .kexp import KappaParams
from .returns import reconstruct_prices

DATA_DIR = Path(__file__).parent / "data"


def business_days(start, n):
    """``n`` consecutive weekdays starting on or after ``start``."""
    days, d = [], start
    while len(days) < n:
        if d.weekday() < 5:
            days.append(d)
        d += dt.timedelta(days=1)
    return days


def kappa_returns(n, q, neg, pos, seed):
    """Returns whose sign is negative with probability ``q`` and whose
    magnitude follows ``neg`` or ``pos`` accordingly."""
    rng = np.random.default_rng(seed)
    signs = rng.random(n) < q
    mags = np.empty(n)
    k = int(signs.sum())
    if k:
        mags[signs] = kexp.sample(k, neg, rng)
    if n - k:
        mags[~signs] = kexp.sample(n - k, pos, rng)
    return np.where(signs, -mags, mags)


def beta_for_median(kappa, alpha, median):
    """kappa-generalised ``beta`` giving the requested median."""
    return -kexp.klog(0.5, kappa) / median ** alpha


def write_price_csv(path, returns, first_close=100.0, start=dt.date(2000, 1, 3)):
    closes = reconstruct_prices(first_close, returns)
    dates = business_days(start, closes.size)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["date", "close"])
        for d, c in zip(dates, closes):
            w.writerow([d.isoformat(), repr(float(c))])


def build_fixtures(out_dir=DATA_DIR, seed=20240601):
    """Write the kappa and normal fixture directories plus ``fixtures.json``.

    kappa set: ten instruments, 5000 returns each, ``q ~ U(0.46, 0.50)``,
    ``kappa ~ U(0.3, 0.7)``, ``alpha ~ U(1.2, 1.8)`` per tail, ``beta``
    chosen for a median magnitude near 0.01.  normal set: five instruments,
    2000 returns each, ``sigma = 0.01``.
    """
    out_dir = Path(out_dir)
    rng = np.random.default_rng(seed)
    meta = {"seed": seed, "kappa": {}, "normal": {}}
    (out_dir / "kappa").mkdir(parents=True, exist_ok=True)
    (out_dir / "normal").mkdir(parents=True, exist_ok=True)
    for i in range(1, 11):
        ticker = f"KG{i:02d}"
        q = float(rng.uniform(0.46, 0.50))
        tails = {}
        for side in ("neg", "pos"):
            kappa, alpha = float(rng.uniform(0.3, 0.7)), float(rng.uniform(1.2, 1.8))
            median = float(rng.uniform(0.008, 0.012))
            tails[side] = KappaParams(kappa, alpha, beta_for_median(kappa, alpha, median))
        r = kappa_returns(5000, q, tails["neg"], tails["pos"], int(rng.integers(2**63)))
        write_price_csv(out_dir / "kappa" / f"{ticker}.csv", r)
        meta["kappa"][ticker] = {"n_returns": 5000, "q": q,
                                 **{s: p.as_dict() for s, p in tails.items()}}
    for i in range(1, 6):
        ticker = f"NR{i:02d}"
        r = np.random.default_rng(int(rng.integers(2**63))).normal(0.0, 0.01, 2000)
        write_price_csv(out_dir / "normal" / f"{ticker}.csv", r)
        meta["normal"][ticker] = {"n_returns": 2000, "mu": 0.0, "sigma": 0.01}
    with open(out_dir / "fixtures.json", "w", encoding="utf-8") as fh:
        json.dump(meta, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return meta


def fixture_path(group, ticker=None):
    """Path of a bundled fixture directory (``"kappa"`` or ``"normal"``) or file."""
    p = DATA_DIR / group
    return p if ticker is None else p / f"{ticker}.csv"


def fixture_params():
    with open(DATA_DIR / "fixtures.json", encoding="utf-8") as fh:
        return json.load(fh)
