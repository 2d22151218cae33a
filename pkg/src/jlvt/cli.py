"""Command-line workflow: gen -> fit -> eval -> bench, plus predict.

Exit status: 0 success, 2 configuration error, 3 data error,
4 numerical error, 5 I/O error.
"""
import argparse
import json
import logging
from pathlib import Path
import sys

from . import config as cfgmod
from .bench import compare, format_table, resize
from .dataset import read_csv, write_csv
from .errors import ConfigError, DataError, MeasurementError, NumericalError
from .metrics import evaluate, mean_sur, write_histogram_csv
from .ols_solver import fit
from .regressors import monomial_basis
from .signalgen import label_with_oracle, random_training_set, test_sequence
from .surrogate import SurrogateModel

log = logging.getLogger("jlvt")

EXIT_CONFIG, EXIT_DATA, EXIT_NUMERICAL, EXIT_IO = 2, 3, 4, 5


def _dump_json(obj, path):
    Path(path).write_text(json.dumps(obj, indent=2) + "\n", encoding="utf-8")


def _out_dir(args, cfg) -> Path:
    out = Path(args.out if args.out is not None else cfg.output.dir)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _labeled(path, cfg):
    ds = read_csv(path)
    if ds.outputs is None:
        log.info("%s has no VT column; labeling with the oracle", path)
        ds = label_with_oracle(ds, cfg.oracle.params())
    return ds


def _test_files(args, cfg, out):
    if args.test:
        return [Path(p) for p in args.test]
    return [out / f"{s.name}.csv" for s in cfg.signals]


def cmd_gen(args, cfg):
    out = _out_dir(args, cfg)
    params = cfg.oracle.params()
    train = random_training_set(cfg.ranges, cfg.train.n, cfg.train.seed)
    write_csv(label_with_oracle(train, params), out / "train.csv")
    written = [out / "train.csv"]
    for s in cfg.signals:
        ds = label_with_oracle(test_sequence(s.kind, s.n, cfg.ranges, s.waveform), params)
        write_csv(ds, out / f"{s.name}.csv")
        written.append(out / f"{s.name}.csv")
    for p in written:
        print(p)


def cmd_fit(args, cfg):
    out = _out_dir(args, cfg)
    train = read_csv(args.train or out / "train.csv", require_outputs=True)
    basis = monomial_basis(train.inputs.shape[1], cfg.solver.include_bias)
    model = fit(train, basis, cfg.scaler(), cfg.solver.mode)
    path = Path(args.model) if args.model else out / "model.json"
    model.save(path)
    r = model.fit_report
    print(f"{path}: {basis.n_columns} coefficients, residual norm {r.residual_norm:.6g}, "
          f"condition indicator {r.condition_indicator:.3g}")


def _model(args, out):
    return SurrogateModel.load(args.model if args.model else out / "model.json")


def cmd_eval(args, cfg):
    out = _out_dir(args, cfg)
    model = _model(args, out)
    for path in _test_files(args, cfg, out):
        ds = _labeled(path, cfg)
        rep = evaluate(ds.outputs, model.predict(ds.inputs), cfg.metrics.bins, cfg.metrics.normalization)
        name = path.stem
        _dump_json(rep.to_dict(), out / f"eval_{name}.json")
        write_histogram_csv(rep.histogram, out / f"hist_{name}.csv")
        print(f"{name}: NMSE% {rep.nmse_percent:.6g}  |mu| {rep.dvt_abs_mean:.6g} V  "
              f"sigma {rep.dvt_std:.6g} V")


def cmd_bench(args, cfg):
    out = _out_dir(args, cfg)
    model = _model(args, out)
    params = cfg.oracle.params()
    bc = cfg.bench
    rows, records = [], []
    for path in _test_files(args, cfg, out):
        ds = _labeled(path, cfg)
        nmse = evaluate(ds.outputs, model.predict(ds.inputs), cfg.metrics.bins,
                        cfg.metrics.normalization).nmse_percent
        timing, ref, pred = compare(params, model, resize(ds, bc.n), bc)
        rows.append((path.stem, nmse, timing))
        records.append({"signal": path.stem, "nmse_percent": nmse, **timing.to_dict(),
                        "n": bc.n, "rt_ref_samples": ref.samples, "rt_pred_samples": pred.samples,
                        "ref_checksum": ref.checksums[0], "pred_checksum": pred.checksums[0],
                        "unreliable": ref.unreliable or pred.unreliable})
    rt_ref = sum(r[2].rt_ref for r in rows) / len(rows)
    rt_pred = sum(r[2].rt_pred for r in rows) / len(rows)
    report = {"signals": records, "mean_sur": mean_sur([r[2] for r in rows]),
              "sur_of_mean_runtimes": rt_ref / rt_pred}
    _dump_json(report, out / "timing.json")
    table = format_table(rows)
    (out / "table.txt").write_text(table, encoding="utf-8")
    print(table, end="")


def cmd_predict(args, cfg):
    out = _out_dir(args, cfg)
    model = _model(args, out)
    ds = read_csv(args.inputs)
    preds = model.predict(ds.inputs)
    dest = Path(args.output) if args.output else out / "predictions.csv"
    write_csv(ds.with_outputs(preds, provenance="predictions"), dest)
    print(dest)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", default=argparse.SUPPRESS, help="experiment config JSON")
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS, help="training seed override")
    common.add_argument("--out", default=argparse.SUPPRESS, help="output directory")

    p = argparse.ArgumentParser(prog="jlvt", parents=[common],
                                description="Gram-Schmidt polynomial surrogate for JL-DG-MOSFET threshold voltage")
    p.add_argument("--print-default-config", action="store_true", help="print the default config and exit")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command")

    sub.add_parser("gen", parents=[common], help="generate labeled train/test CSVs")
    f = sub.add_parser("fit", parents=[common], help="fit a surrogate to a training CSV")
    f.add_argument("--train", help="training CSV (default <out>/train.csv)")
    f.add_argument("--model", help="model JSON to write (default <out>/model.json)")
    for name, text in (("eval", "NMSE%% and D_VT statistics"), ("bench", "runtime comparison and SUR")):
        e = sub.add_parser(name, parents=[common], help=text)
        e.add_argument("--model", help="model JSON (default <out>/model.json)")
        e.add_argument("test", nargs="*", help="test CSVs (default: the configured signals in <out>)")
    pr = sub.add_parser("predict", parents=[common], help="predict V_T for an inputs CSV")
    pr.add_argument("--model", help="model JSON (default <out>/model.json)")
    pr.add_argument("inputs", help="CSV with L,Ld,tsi,tox,VC,VD columns")
    pr.add_argument("-o", "--output", help="predictions CSV (default <out>/predictions.csv)")
    return p


COMMANDS = {"gen": cmd_gen, "fit": cmd_fit, "eval": cmd_eval, "bench": cmd_bench, "predict": cmd_predict}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    if args.print_default_config:
        sys.stdout.write(cfgmod.default_config_json())
        return 0
    if not args.command:
        parser.print_usage(sys.stderr)
        return EXIT_CONFIG
    for name in ("config", "seed", "out"):
        if not hasattr(args, name):
            setattr(args, name, None)
    try:
        cfg = cfgmod.load(args.config) if args.config else cfgmod.ExperimentConfig().validate()
        if args.seed is not None:
            if args.seed < 0:
                raise ConfigError("--seed must be >= 0")
            cfg.train.seed = args.seed
        COMMANDS[args.command](args, cfg)
    except ConfigError as e:
        print(f"config error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    except DataError as e:
        print(f"data error: {e}", file=sys.stderr)
        return EXIT_DATA
    except (NumericalError, MeasurementError) as e:
        print(f"numerical error: {e}", file=sys.stderr)
        return EXIT_NUMERICAL
    except OSError as e:
        print(f"I/O error: {e}", file=sys.stderr)
        return EXIT_IO
    return 0


if __name__ == "__main__":
    sys.exit(main())
