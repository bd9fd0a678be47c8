"""Command-line entry point: ``kappafit {fit,gof,batch,plot,sample}``.

Exit codes: 0 success, 2 input error, 3 a fit did not converge (the
partial report is still written).
"""

import argparse
import csv
import io
import sys
from pathlib import Path

import numpy as np

from . import __version__, kexp, mle, report as rep, returns as rp
from .exceptions import DomainError, InputError, KappaFitError
from .gof import mc_gof_test
from .plot import tail_plot_svg

EXIT_OK, EXIT_INPUT, EXIT_CONVERGENCE = 0, 2, 3


def _emit(text, out):
    if out:
        rep.write_atomic(out, text)
    else:
        sys.stdout.write(text)


def _read_values(path):
    """A one-column ``value`` CSV (as written by ``kappafit sample``), or None."""
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or [h.strip().lower() for h in header] != ["value"]:
            return None
        try:
            return np.array([float(row[0]) for row in reader if row])
        except (ValueError, IndexError):
            raise InputError(f"{path}: bad value row") from None


def cmd_fit(args):
    families = rep.parse_list(args.families, rep.FAMILIES, "family")
    tails = rep.parse_list(args.tails, rep.TAILS, "tail")
    values = _read_values(args.csv)
    if values is not None:
        # a bare positive sample: fit the kappa law directly
        if values.size < rep.MIN_TAIL:
            raise InputError(f"insufficient data: {values.size} values (min {rep.MIN_TAIL})")
        fit = mle.fit_kappa(values)
        doc = {"source": str(args.csv), "fits": {"kappa": fit.as_dict()}}
        _emit(rep.dumps(doc), args.out)
        return EXIT_OK if fit.converged else EXIT_CONVERGENCE
    result = rep.analyze_file(args.csv, families=families, tails=tails)
    _emit(rep.dumps(result.as_dict()), args.out)
    return EXIT_OK if result.ok else EXIT_CONVERGENCE


def cmd_gof(args):
    prices = rp.load_prices(args.csv)
    tails = rp.split_tails(rp.compute_returns(prices))
    sample = tails.tail(args.tail)
    if sample.size < rep.MIN_TAIL:
        raise InputError(f"insufficient returns: {sample.size} in the {args.tail} tail "
                         f"(min {rep.MIN_TAIL}/tail)")
    result = mc_gof_test(sample, n_boot=args.n_boot, alpha_level=args.level, seed=args.seed,
                         n_jobs=args.jobs)
    doc = {"ticker": prices.ticker, "tail": args.tail, **result.as_dict(),
           "meta": rep._meta(args.seed, args.n_boot, args.level)}
    _emit(rep.dumps(doc), args.out)
    return EXIT_OK


def cmd_batch(args):
    families = rep.parse_list(args.families, rep.FAMILIES, "family")
    if "kappa" not in families:
        raise InputError("batch needs the kappa family")
    summary, reports = rep.run_batch(args.directory, n_boot=args.n_boot, level=args.level,
                                     seed=args.seed, families=families, n_jobs=args.jobs)
    text = rep.dumps(summary.as_dict())
    if args.out_dir:
        out = Path(args.out_dir)
        for ticker, r in sorted(reports.items()):
            rep.write_atomic(out / "reports" / f"{ticker}.json", rep.dumps(r.as_dict()))
        rep.write_atomic(out / "summary.json", text)
    else:
        sys.stdout.write(text)
    if summary.failed and not summary.attempted:
        return EXIT_INPUT
    return EXIT_OK


def cmd_plot(args):
    prices = rp.load_prices(args.csv)
    r = rp.compute_returns(prices).returns
    result = rep.analyze_returns(prices.ticker, r)
    rep.write_atomic(args.out, tail_plot_svg(r, result))
    return EXIT_OK if result.ok else EXIT_CONVERGENCE


def cmd_sample(args):
    params = kexp.KappaParams(args.kappa, args.alpha, args.beta)
    if args.n < 1:
        raise DomainError("-n must be >= 1")
    x = kexp.sample(args.n, params, args.seed)
    buf = io.StringIO()
    buf.write("value\n")
    for v in x:
        buf.write(repr(float(v)) + "\n")
    _emit(buf.getvalue(), args.out)
    return EXIT_OK


def build_parser():
    p = argparse.ArgumentParser(
        prog="kappafit",
        description="Fit kappa-generalised, stable and normal laws to daily log returns.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    f = sub.add_parser("fit", help="fit return laws to one price file")
    f.add_argument("csv")
    f.add_argument("--families", default=",".join(rep.FAMILIES))
    f.add_argument("--tails", default=",".join(rep.TAILS))
    f.add_argument("--out")
    f.set_defaults(func=cmd_fit)

    g = sub.add_parser("gof", help="bootstrap KS test of one kappa tail")
    g.add_argument("csv")
    g.add_argument("--tail", choices=rep.TAILS, required=True)
    g.add_argument("--n-boot", type=int, default=rep.DEFAULT_N_BOOT)
    g.add_argument("--level", type=float, default=rep.DEFAULT_LEVEL)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--jobs", type=int, default=1)
    g.add_argument("--out")
    g.set_defaults(func=cmd_gof)

    b = sub.add_parser("batch", help="test both tails of every CSV in a directory")
    b.add_argument("directory")
    b.add_argument("--n-boot", type=int, default=rep.DEFAULT_N_BOOT)
    b.add_argument("--level", type=float, default=rep.DEFAULT_LEVEL)
    b.add_argument("--seed", type=int, default=0)
    b.add_argument("--families", default="kappa,normal")
    b.add_argument("--jobs", type=int, default=1)
    b.add_argument("--out-dir")
    b.set_defaults(func=cmd_batch)

    pl = sub.add_parser("plot", help="SVG of both empirical tails with fitted curves")
    pl.add_argument("csv")
    pl.add_argument("--out", required=True)
    pl.set_defaults(func=cmd_plot)

    s = sub.add_parser("sample", help="draw from a kappa-generalised law")
    s.add_argument("--kappa", type=float, required=True)
    s.add_argument("--alpha", type=float, required=True)
    s.add_argument("--beta", type=float, required=True)
    s.add_argument("-n", type=int, required=True)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--out")
    s.set_defaults(func=cmd_sample)
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (InputError, DomainError, OSError) as exc:
        print(f"kappafit: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except KappaFitError as exc:
        print(f"kappafit: error: {exc}", file=sys.stderr)
        return EXIT_CONVERGENCE


if __name__ == "__main__":
    sys.exit(main())
