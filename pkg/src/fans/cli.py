"""Command-line surface: simulate, train, predict, bench.

Exit codes: 0 success, 2 usage, 3 data, 4 numeric/convergence, 5 I/O.
Failures print a single machine-parsable line ``error[<kind>]: <message>``
to stderr.
"""

import argparse
import os
import sys

import numpy as np

from . import bench, classifier, persist, plr, simgen
from .data import load_csv, save_csv
from .errors import ConfigError, DataError, ModelFormatError, NumericError
from .kde import BandwidthRule
from .parallel import WORKERS_ENV, resolve_workers
from .transform import Variant


def _add_model_knobs(p: argparse.ArgumentParser) -> None:
    p.add_argument("--splits", type=int, default=classifier.DEFAULT_SPLITS,
                   help="number of random splits L (must be even)")
    p.add_argument("--bandwidth", default="theory",
                   help="theory | silverman | fixed:<h>")
    p.add_argument("--floor", type=float, default=0.01,
                   help="density Winsorization floor (cap is its inverse)")
    p.add_argument("--lambda-count", type=int, default=plr.DEFAULT_PATH_LENGTH,
                   help="penalty path length T")
    p.add_argument("--lambda-ratio", type=float, default=plr.DEFAULT_PATH_RATIO,
                   help="smallest penalty as a fraction of the largest")
    p.add_argument("--folds", type=int, default=5, help="cross-validation folds")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fans",
        description="Density-ratio feature augmentation with penalized "
        "logistic regression, plus simulators and benchmarks.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_sim = sub.add_parser("simulate", help="generate a synthetic train/test pair")
    p_sim.add_argument("--example", required=True, choices=simgen.EXAMPLES)
    p_sim.add_argument("--p", type=int, required=True, help="feature dimension")
    p_sim.add_argument("--n", type=int, required=True, help="training rows per class")
    p_sim.add_argument("--n-test", type=int, default=None,
                       help="test rows per class (default: same as --n)")
    p_sim.add_argument("--rho", type=float, default=0.0)
    p_sim.add_argument("--seed", type=int, default=0)
    p_sim.add_argument("--out", required=True, help="output directory")

    p_train = sub.add_parser("train", help="train an ensemble on a CSV")
    p_train.add_argument("--data", required=True)
    p_train.add_argument("--label-col", default="label")
    p_train.add_argument("--variant", default="fans", choices=("fans", "fans2"))
    p_train.add_argument("--seed", type=int, default=0)
    p_train.add_argument("--workers", type=int, default=None)
    p_train.add_argument("--model-out", required=True)
    _add_model_knobs(p_train)

    p_pred = sub.add_parser("predict", help="score a CSV with a saved model")
    p_pred.add_argument("--model-in", required=True)
    p_pred.add_argument("--data", required=True)
    p_pred.add_argument("--label-col", default=None,
                        help="label column to ignore, if the file has one")
    p_pred.add_argument("--out", required=True, help="predictions CSV path")

    p_bench = sub.add_parser("bench", help="repeated train/test benchmark")
    p_bench.add_argument("--example", choices=simgen.EXAMPLES)
    p_bench.add_argument("--p", type=int, default=10)
    p_bench.add_argument("--n", type=int, default=100, help="training rows per class")
    p_bench.add_argument("--n-test", type=int, default=None)
    p_bench.add_argument("--rho", type=float, default=0.0)
    p_bench.add_argument("--data", help="real-data CSV instead of --example")
    p_bench.add_argument("--label-col", default="label")
    p_bench.add_argument("--train-frac", type=float, default=None,
                         help="training fraction for --data mode")
    p_bench.add_argument("--methods", default="fans,plr",
                         help="comma list from: fans,fans2,plr,nb")
    p_bench.add_argument("--reps", type=int, default=20)
    p_bench.add_argument("--seed", type=int, default=0)
    p_bench.add_argument("--workers", type=int, default=None,
                         help=f"worker processes (fallback: ${WORKERS_ENV})")
    p_bench.add_argument("--se", default="mad", choices=("mad", "sd"),
                         help="spread estimate written to reports")
    p_bench.add_argument("--out", required=True, help="report directory")
    _add_model_knobs(p_bench)

    return parser


def cmd_simulate(args) -> int:
    spec = simgen.SimSpec(
        example=args.example,
        p=args.p,
        n_per_class=args.n,
        n_test_per_class=args.n_test or args.n,
        rho=args.rho,
        seed=args.seed,
    )
    train, test = simgen.generate(spec)
    os.makedirs(args.out, exist_ok=True)
    train_path = os.path.join(args.out, "train.csv")
    test_path = os.path.join(args.out, "test.csv")
    save_csv(train, train_path)
    save_csv(test, test_path)
    print(train_path)
    print(test_path)
    return 0


def cmd_train(args) -> int:
    data = load_csv(args.data, label_column=args.label_col)
    config = classifier.FansConfig(
        variant=Variant.parse(args.variant),
        n_splits=args.splits,
        floor=args.floor,
        bandwidth=BandwidthRule.parse(args.bandwidth),
        path_length=args.lambda_count,
        path_ratio=args.lambda_ratio,
        cv_folds=args.folds,
        seed=args.seed,
        workers=resolve_workers(args.workers),
    )
    model = classifier.train(data, config)
    persist.save_model(model, args.model_out)
    print(args.model_out)
    return 0


def cmd_predict(args) -> int:
    model = persist.load_model(args.model_in)
    data = load_csv(args.data, label_column=args.label_col)
    probs = classifier.predict_proba(model, data.features)
    labels = (probs >= 0.5).astype(np.int64)
    with open(args.out, "w", encoding="utf-8") as fh:
        fh.write("row_index,prob,label\n")
        for i, (prob, label) in enumerate(zip(probs, labels)):
            fh.write(f"{i},{float(prob)!r},{int(label)}\n")
    print(args.out)
    return 0


def cmd_bench(args) -> int:
    if (args.example is None) == (args.data is None):
        raise ConfigError("bench needs exactly one of --example or --data")
    methods = tuple(m.strip() for m in args.methods.split(",") if m.strip())
    common = dict(
        methods=methods,
        seed=args.seed,
        n_splits=args.splits,
        floor=args.floor,
        bandwidth=BandwidthRule.parse(args.bandwidth),
        path_length=args.lambda_count,
        path_ratio=args.lambda_ratio,
        cv_folds=args.folds,
    )
    if args.example is not None:
        if args.train_frac is not None:
            raise ConfigError("--train-frac applies only to --data mode")
        settings = bench.BenchSettings(
            example=args.example,
            p=args.p,
            n_per_class=args.n,
            n_test_per_class=args.n_test,
            rho=args.rho,
            **common,
        )
        title = f"benchmark {args.example} p={args.p} n={args.n}/class rho={args.rho}"
    else:
        dataset = load_csv(args.data, label_column=args.label_col)
        if dataset.labels is None:
            raise ConfigError("--data mode needs a label column")
        settings = bench.BenchSettings(
            features=dataset.features,
            labels=dataset.labels,
            train_fraction=args.train_frac,
            **common,
        )
        title = f"benchmark {os.path.basename(args.data)} train-frac={args.train_frac}"
    report = bench.run_benchmark(
        settings,
        reps=args.reps,
        workers=resolve_workers(args.workers),
        title=title,
        se_flavor=args.se,
    )
    paths = bench.write_report(report, args.out)
    sys.stdout.write(bench.format_report(report))
    print(paths[bench.REPORT_CSV])
    return 0


_COMMANDS = {
    "simulate": cmd_simulate,
    "train": cmd_train,
    "predict": cmd_predict,
    "bench": cmd_bench,
}


def _fail(kind: str, code: int, exc: BaseException) -> int:
    print(f"error[{kind}]: {exc}", file=sys.stderr)
    return code


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except ConfigError as exc:
        return _fail("usage", 2, exc)
    except DataError as exc:
        return _fail("data", 3, exc)
    except NumericError as exc:
        return _fail("numeric", 4, exc)
    except ModelFormatError as exc:
        return _fail("io", 5, exc)
    except OSError as exc:
        return _fail("io", 5, exc)


if __name__ == "__main__":
    sys.exit(main())
