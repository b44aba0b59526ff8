"""Command-line entry point: fit, bench, train, perplexity, classify.

Data goes to stdout or the files named in flags; progress and warnings go to
stderr. Exit status: 0 success, 1 usage error, 2 data or model error. All
floats print with full round-trip precision so regression CSVs stay stable.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from importlib.metadata import version as _dist_version

from . import corpus as corpus_mod
from . import evaluation, lda, synth
from .estimators import EstimatorConfig, estimate_gn, estimate_minka_fpi, estimate_moments
from .polya import build_histograms, polya_log_likelihood_hist, read_samples

__all__ = ["main", "dispatch"]


class _Parser(argparse.ArgumentParser):
    """argparse with usage failures mapped to exit status 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _fmt(x: float) -> str:
    return repr(float(x))


def _parse_range(text: str) -> tuple[int, ...]:
    """'a:b:step' inclusive of b when it lands on the lattice; 'a' alone is a
    single value; comma lists are accepted too."""
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise ValueError(f"range must be start:stop:step, got {text!r}")
        start, stop, step = (int(p) for p in parts)
        if step < 1 or stop < start:
            raise ValueError(f"bad range {text!r}")
        return tuple(range(start, stop + 1, step))
    return tuple(int(p) for p in text.split(","))


def _load_stopwords_arg(arg: str | None):
    if arg is None:
        return None  # bundled default list
    if arg == "none":
        return frozenset()
    return corpus_mod.load_stopwords(arg)


def _cmd_fit(args) -> int:
    samples = read_samples(args.input)
    cfg = EstimatorConfig(tolerance=args.tolerance, max_iterations=args.max_iter)
    if args.method == "moments":
        params = estimate_moments(samples, cfg)
        iterations, converged = 0, True
        loglik = polya_log_likelihood_hist(params, build_histograms(samples))
    else:
        run = estimate_minka_fpi if args.method == "fpi" else estimate_gn
        fit = run(samples, cfg)
        params, iterations, converged = fit.params, fit.iterations, fit.converged
        loglik = fit.final_log_likelihood
    alpha = [float(a) for a in params.alpha]
    if args.json:
        print(json.dumps({
            "alpha": alpha,
            "iterations": iterations,
            "loglik": loglik,
            "converged": converged,
        }))
    else:
        print("alpha = [" + ", ".join(_fmt(a) for a in alpha) + "]")
        print(f"iterations={iterations}")
        print(f"loglik={_fmt(loglik)}")
        print(f"converged={'true' if converged else 'false'}")
    return 0


def _cmd_bench(args) -> int:
    grid = synth.BenchGrid(
        dimension=args.k,
        alpha_upper=args.alpha_upper,
        sample_counts=_parse_range(args.samples),
        element_counts=_parse_range(args.elements),
        repeats=args.repeats,
        seed=args.seed,
    )
    run = synth.run_accuracy_bench if args.kind == "accuracy" else synth.run_speed_bench
    records = run(grid)
    if args.out:
        synth.write_bench_csv(records, args.out)
        logging.info("wrote %d benchmark rows to %s", len(records), args.out)
    else:
        print(",".join(synth.CSV_HEADER))
        for rec in records:
            method, n, e, iters, ms, mean_err, max_err = rec.csv_row()
            print(f"{method},{n},{e},{iters},{_fmt(ms)},{_fmt(mean_err)},{_fmt(max_err)}")
    return 0


def _cmd_train(args) -> int:
    stop = _load_stopwords_arg(args.stopwords)
    corp = corpus_mod.load_corpus(args.corpus, stop)
    if args.label:
        corp = corpus_mod.filter_by_label(corp, args.label)
    cfg = lda.TrainConfig(
        n_topics=args.topics,
        iterations=args.iterations,
        burn_in=args.burn_in,
        hyper_update_interval=args.update_interval,
        seed=args.seed,
    )
    train = lda.train_lda if args.variant == "lda" else lda.train_lda_gn
    logging.info("training %s: %d docs, %d terms, K=%d, %d iterations",
                 args.variant, corp.n_docs, corp.n_terms, args.topics, args.iterations)
    model = train(corp, cfg)
    lda.save_model(model, args.out)
    logging.info("model written to %s", args.out)
    return 0


def _cmd_perplexity(args) -> int:
    model = lda.load_model(args.model)
    test = corpus_mod.load_corpus(args.test_corpus, _load_stopwords_arg(args.stopwords))
    cfg = evaluation.LtrConfig(particles=args.particles, seed=args.seed)
    print(_fmt(evaluation.perplexity(model, test, cfg)))
    return 0


def _cmd_classify(args) -> int:
    merged = evaluation.mc_lda_merge(lda.load_model(args.ham_model), lda.load_model(args.spam_model))
    test = corpus_mod.load_corpus(args.test, _load_stopwords_arg(args.stopwords))
    thresholds = [float(t) for t in args.thresholds.split(",") if t]
    if not thresholds:
        raise ValueError("no thresholds given")
    cfg = evaluation.ScoreConfig(inference_sweeps=args.sweeps, seed=args.seed)
    reports = evaluation.threshold_sweep(merged, test, thresholds, cfg)
    lines = ["threshold,accuracy,precision,recall,f1,tp,fp,tn,fn"]
    for r in reports:
        lines.append(
            f"{_fmt(r.threshold)},{_fmt(r.accuracy)},{_fmt(r.precision)},"
            f"{_fmt(r.recall)},{_fmt(r.f_measure)},{r.tp},{r.fp},{r.tn},{r.fn}"
        )
    text = "\n".join(lines) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
        logging.info("wrote %d reports to %s", len(reports), args.out)
    else:
        sys.stdout.write(text)
    return 0


def _build_parser() -> _Parser:
    parser = _Parser(prog="polyalda", description=__doc__)
    parser.add_argument("--version", action="version", version=f"polyalda {_dist_version('polyalda')}")
    parser.add_argument("-v", "--verbose", action="count", default=0,
                        help="-v for progress, -vv for debug output (stderr)")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    fit = sub.add_parser("fit", help="fit multivariate Polya parameters to a samples file")
    fit.add_argument("--method", required=True, choices=("moments", "fpi", "gn"))
    fit.add_argument("--input", required=True, help="sample file: one count vector per line")
    fit.add_argument("--tolerance", type=float, default=1e-6)
    fit.add_argument("--max-iter", type=int, default=1000)
    fit.add_argument("--json", action="store_true", help="emit one JSON object instead of lines")
    fit.set_defaults(run=_cmd_fit)

    bench = sub.add_parser("bench", help="synthetic accuracy/speed benchmarks")
    bench.add_argument("kind", choices=("accuracy", "speed"))
    bench.add_argument("--k", type=int, default=10, help="distribution dimension")
    bench.add_argument("--alpha-upper", type=float, default=1.0)
    bench.add_argument("--samples", default="10:1000:50", help="sample-count axis, start:stop:step")
    bench.add_argument("--elements", default="1000:20000:1000", help="per-sample total axis")
    bench.add_argument("--repeats", type=int, default=10)
    bench.add_argument("--seed", type=int, default=42)
    bench.add_argument("--out", help="CSV path (stdout when omitted)")
    bench.set_defaults(run=_cmd_bench)

    train = sub.add_parser("train", help="train a topic model and write a model file")
    train.add_argument("--variant", required=True, choices=("lda", "lda-gn"))
    train.add_argument("--topics", type=int, required=True)
    train.add_argument("--iterations", type=int, default=500,
                       help="Gibbs sweeps (desk-scale default; full-scale runs use 2000)")
    train.add_argument("--burn-in", type=int, default=50)
    train.add_argument("--update-interval", type=int, default=20)
    train.add_argument("--seed", type=int, default=42)
    train.add_argument("--corpus", required=True,
                       help="line-per-doc file, directory of .txt, or ham//spam/ layout")
    train.add_argument("--label", default=None, choices=("ham", "spam"),
                       help="train on one class of a labeled corpus, keeping the full "
                            "shared vocabulary (for mergeable two-class models)")
    train.add_argument("--stopwords", default=None,
                       help="stop-word file, or 'none' (default: bundled English list)")
    train.add_argument("--out", required=True, help="model file path")
    train.set_defaults(run=_cmd_train)

    perp = sub.add_parser("perplexity", help="held-out perplexity of a trained model")
    perp.add_argument("--model", required=True)
    perp.add_argument("--test-corpus", required=True)
    perp.add_argument("--particles", type=int, default=20)
    perp.add_argument("--seed", type=int, default=42)
    perp.add_argument("--stopwords", default=None, help="stop-word file, or 'none'")
    perp.set_defaults(run=_cmd_perplexity)

    cls = sub.add_parser("classify", help="two-model spam classification over thresholds")
    cls.add_argument("--ham-model", required=True)
    cls.add_argument("--spam-model", required=True)
    cls.add_argument("--test", required=True, help="labeled corpus directory (ham/ and spam/)")
    cls.add_argument("--thresholds", default="0.05,0.1,0.25,0.3,0.35,0.4,0.5,0.6,0.7,0.8,0.9")
    cls.add_argument("--sweeps", type=int, default=50)
    cls.add_argument("--seed", type=int, default=42)
    cls.add_argument("--stopwords", default=None, help="stop-word file, or 'none'")
    cls.add_argument("--out", help="CSV path (stdout when omitted)")
    cls.set_defaults(run=_cmd_classify)
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse exits for usage errors, --help, --version
        return int(exc.code or 0)
    level = logging.WARNING - 10 * min(args.verbose, 2)
    logging.basicConfig(stream=sys.stderr, level=level, format="%(levelname)s %(message)s")
    if getattr(args, "run", None) is None:
        parser.print_usage(sys.stderr)
        return 1
    try:
        return args.run(args)
    except (ValueError, OSError, KeyError) as exc:
        print(f"polyalda {args.command}: error: {exc}", file=sys.stderr)
        return 2


dispatch = main

if __name__ == "__main__":
    sys.exit(main())
