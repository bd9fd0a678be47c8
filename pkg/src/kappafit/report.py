"""Per-instrument analysis and batch aggregation behind the command line."""

from concurrent.futures import ProcessPoolExecutor
from importlib import resources
from dataclasses import dataclass, field
import json
import math
import os
from pathlib import Path
import tempfile
import zlib

import numpy as np

from . import __version__, mle, returns as rp
from .exceptions import ConvergenceError, DegenerateInputError, InputError, KappaFitError
from .gof import child_seed, mc_gof_test, splitmix64
from .ks import ks_statistic

FAMILIES = ("kappa", "stable", "normal")
TAILS = ("neg", "pos")
MIN_TAIL = 30
DEFAULT_N_BOOT = 100
DEFAULT_LEVEL = 0.1


@dataclass
class InstrumentReport:
    ticker: str
    n_returns: int
    q: float
    zero_count: int
    fits: dict = field(default_factory=dict)
    gof: dict = field(default_factory=dict)
    ks_comparison: dict = field(default_factory=dict)
    skipped: dict = field(default_factory=dict)
    errors: dict = field(default_factory=dict)
    meta: dict = field(default_factory=dict)

    @property
    def ok(self):
        """False when any fit failed or did not converge."""
        return not self.errors and all(f.converged for f in self.fits.values())

    def as_dict(self):
        return {
            "ticker": self.ticker,
            "n_returns": self.n_returns,
            "q": self.q,
            "zero_count": self.zero_count,
            "fits": {k: v.as_dict() for k, v in self.fits.items()},
            "gof": {k: v.as_dict() for k, v in self.gof.items()},
            "ks_comparison": dict(self.ks_comparison),
            "skipped": dict(self.skipped),
            "errors": dict(self.errors),
            "meta": dict(self.meta),
        }


def _meta(seed=None, n_boot=None, level=None):
    return {"tool": "kappafit", "version": __version__, "seed": seed, "n_boot": n_boot,
            "level": level}


def parse_list(text, allowed, what):
    items = [s.strip() for s in text.split(",") if s.strip()]
    bad = [s for s in items if s not in allowed]
    if bad or not items:
        raise InputError(f"unknown {what}: {','.join(bad) or text!r} (choose from {','.join(allowed)})")
    return tuple(dict.fromkeys(items))


def analyze_returns(ticker, returns, families=FAMILIES, tails=TAILS, gof_tails=(),
                    n_boot=DEFAULT_N_BOOT, level=DEFAULT_LEVEL, seed=0, n_jobs=1):
    """Fit the requested families and, optionally, run the bootstrap test per tail.

    The kappa family is fitted separately to each tail; its full-sample KS
    distance uses the q-weighted two-tail model so that all three families
    are compared on the same empirical distribution.  ``gof_tails`` tails
    are tested with seeds derived from ``seed`` (tail index 0 = neg, 1 = pos).
    """
    r = np.asarray(returns, dtype=float)
    tails_data = rp.split_tails(r)
    report = InstrumentReport(
        ticker=ticker,
        n_returns=int(r.size),
        q=tails_data.q,
        zero_count=tails_data.zero_count,
        meta=_meta(seed, n_boot if gof_tails else None, level if gof_tails else None),
    )

    if "normal" in families:
        try:
            report.fits["normal"] = mle.fit_normal(r)
            report.ks_comparison["normal"] = report.fits["normal"].ks
        except DegenerateInputError as exc:
            report.skipped["normal"] = str(exc)
    if "stable" in families:
        if r.size < 20:
            report.skipped["stable"] = "fewer than 20 returns"
        else:
            try:
                report.fits["stable"] = mle.fit_stable(r, heavy_tailed=True)
                report.ks_comparison["stable"] = report.fits["stable"].ks
            except (ConvergenceError, DegenerateInputError) as exc:
                report.errors["stable"] = str(exc)

    if "kappa" in families:
        for tail in tails:
            sample = tails_data.neg if tail == "neg" else tails_data.pos
            key = f"kappa_{tail}"
            if sample.size < MIN_TAIL:
                report.skipped[key] = f"{sample.size} observations in the {tail} tail (need {MIN_TAIL})"
                continue
            try:
                report.fits[key] = mle.fit_kappa(sample)
            except ConvergenceError as exc:
                report.errors[key] = str(exc)
        if "kappa_neg" in report.fits and "kappa_pos" in report.fits:
            q, zm = tails_data.q, tails_data.zero_count / tails_data.n
            neg, pos = report.fits["kappa_neg"].params, report.fits["kappa_pos"].params
            report.ks_comparison["kappa"] = ks_statistic(
                r,
                lambda v: rp.composite_sf(v, q, neg, pos, zm),
                lambda v: rp.composite_sf_left(v, q, neg, pos, zm),
            )
        for i, tail in enumerate(TAILS):
            key = f"kappa_{tail}"
            if tail in gof_tails and key in report.fits:
                sample = tails_data.neg if tail == "neg" else tails_data.pos
                report.gof[tail] = mc_gof_test(
                    sample, n_boot=n_boot, alpha_level=level, seed=child_seed(seed, i),
                    n_jobs=n_jobs, fit=report.fits[key])

    if not report.fits and not report.errors:
        raise DegenerateInputError(
            f"insufficient returns for any fit (min {MIN_TAIL} per tail): "
            + "; ".join(f"{k}: {v}" for k, v in report.skipped.items()))
    return report


def analyze_file(path, **kwargs):
    prices = rp.load_prices(path)
    rs = rp.compute_returns(prices)
    return analyze_returns(prices.ticker, rs.returns, **kwargs)


# ---------------------------------------------------------------------------
# batch

@dataclass
class BatchSummary:
    """Counts of instruments whose tails pass the bootstrap test (p >= level).

    Percentages are relative to the instruments attempted; instruments with a
    degenerate tail are skipped and excluded from the denominator.
    """

    level: float
    n_boot: int
    seed: int
    attempted: list
    significant: dict
    skipped: dict
    failed: dict

    @property
    def counts(self):
        return {k: len(v) for k, v in self.significant.items()}

    @property
    def percentages(self):
        n = len(self.attempted)
        return {k: (100.0 * c / n if n else 0.0) for k, c in self.counts.items()}

    def as_dict(self):
        return {
            "meta": _meta(self.seed, self.n_boot, self.level),
            "n_attempted": len(self.attempted),
            "attempted": list(self.attempted),
            "counts": self.counts,
            "percentages": self.percentages,
            "significant": {k: list(v) for k, v in self.significant.items()},
            "skipped": dict(self.skipped),
            "failed": dict(self.failed),
        }


def instrument_seed(seed, ticker):
    """Seed for one instrument, independent of file order and of other files."""
    return splitmix64(int(seed) ^ zlib.crc32(ticker.encode("utf-8")))


def _batch_one(args):
    path, families, n_boot, level, seed = args
    ticker = Path(path).stem
    try:
        prices = rp.load_prices(path, ticker)
        rs = rp.compute_returns(prices)
        tails = rp.split_tails(rs)
        small = [t for t in TAILS if getattr(tails, t).size < MIN_TAIL]
        if small:
            return ticker, "skipped", f"degenerate tail(s): {','.join(small)}", None
        report = analyze_returns(
            ticker, rs.returns, families=families, tails=TAILS, gof_tails=TAILS,
            n_boot=n_boot, level=level, seed=instrument_seed(seed, ticker))
    except KappaFitError as exc:
        return ticker, "failed", str(exc), None
    if set(report.gof) != set(TAILS):
        return ticker, "failed", "; ".join(f"{k}: {v}" for k, v in report.errors.items()), report
    return ticker, "ok", None, report


def summarize(results, level, n_boot, seed):
    attempted, skipped, failed = [], {}, {}
    significant = {"negative": [], "positive": [], "both": [], "either": []}
    for ticker, status, reason, report in sorted(results, key=lambda r: r[0]):
        if status == "skipped":
            skipped[ticker] = reason
            continue
        if status == "failed":
            failed[ticker] = reason
            continue
        attempted.append(ticker)
        neg = not report.gof["neg"].reject
        pos = not report.gof["pos"].reject
        if neg:
            significant["negative"].append(ticker)
        if pos:
            significant["positive"].append(ticker)
        if neg and pos:
            significant["both"].append(ticker)
        if neg or pos:
            significant["either"].append(ticker)
    return BatchSummary(level=level, n_boot=n_boot, seed=seed, attempted=attempted,
                        significant=significant, skipped=skipped, failed=failed)


def run_batch(directory, n_boot=DEFAULT_N_BOOT, level=DEFAULT_LEVEL, seed=0,
              families=("kappa", "normal"), n_jobs=1):
    """Analyse every ``*.csv`` in ``directory``; returns (summary, reports by ticker)."""
    directory = Path(directory)
    if not directory.is_dir():
        raise InputError(f"{directory} is not a directory")
    files = sorted(directory.glob("*.csv"))
    if not files:
        raise InputError(f"{directory} contains no CSV files")
    jobs = [(str(f), tuple(families), n_boot, level, seed) for f in files]
    if n_jobs and n_jobs > 1:
        with ProcessPoolExecutor(max_workers=n_jobs) as pool:
            results = list(pool.map(_batch_one, jobs))
    else:
        results = [_batch_one(job) for job in jobs]
    summary = summarize(results, level, n_boot, seed)
    reports = {r[0]: r[3] for r in results if r[3] is not None}
    return summary, reports


# ---------------------------------------------------------------------------
# output

def dumps(obj):
    """Canonical JSON text (stable key order, non-finite floats as null)."""
    return json.dumps(_clean(obj), indent=2, sort_keys=True) + "\n"


def _clean(obj):
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, (np.floating, float)):
        v = float(obj)
        return v if math.isfinite(v) else None
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    return obj


def write_atomic(path, text):
    """Write ``text`` to ``path`` via a temporary file and rename."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def load_schema():
    """The JSON schema covering every document the command line writes."""
    with resources.files("kappafit").joinpath("schema/report.schema.json").open(encoding="utf-8") as fh:
        return json.load(fh)
