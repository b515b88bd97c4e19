"""Command-line front end.

Subcommands
-----------
run    evaluate one configuration test-then-train and write a JSON-lines trace
sweep  evaluate sampled configurations, write a summary CSV and Pareto front
gen    write generator samples as CSV (header ``f0..f{d-1},label``)

Settings come from built-in defaults, then an optional ``--config`` file of
``key=value`` lines (``#`` starts a comment), then command-line flags; later
sources win. File keys are the flag names without dashes, with ``-``
replaced by ``_`` (``--max-depth 4`` is ``max_depth=4``).

Exit codes: 0 success, 1 configuration error, 2 I/O or ingestion error,
3 domain error during the run.
"""
import argparse
import csv
import json
import os
import sys
from pathlib import Path

from .ensemble import EnsembleConfig, Loss, ShrubEnsemble
from .errors import ConfigError, DomainError, IngestionError
from .evaluation import (
    ConfigGrid,
    StreamSpec,
    front_of,
    run_sweep,
    sample_configs,
    test_then_train,
)
from .evaluation.configs import GRID_KEYS
from .shrub import ShrubConfig, Splitter
from .streams import STREAM_NAMES
from .streams.csvio import LABEL_MAPS

EXIT_CONFIG, EXIT_IO, EXIT_DOMAIN = 1, 2, 3


def _positive_int(text):
    v = int(text)
    if v < 1:
        raise ValueError("must be >= 1")
    return v


def _nonneg_int(text):
    v = int(text)
    if v < 0:
        raise ValueError("must be >= 0")
    return v


def _positive_float(text):
    v = float(text)
    if not v > 0 or v == float("inf"):
        raise ValueError("must be a finite number > 0")
    return v


def _depth(text):
    return None if str(text).lower() == "none" else _positive_int(text)


def _max_features(text):
    text = str(text)
    return text if text in ("all", "sqrt") else _positive_int(text)


def _choice(options):
    def parse(text):
        if text not in options:
            raise ValueError(f"choose from {', '.join(options)}")
        return text

    return parse


def _flag(text):
    low = str(text).lower()
    if low in ("1", "true", "yes", "on"):
        return True
    if low in ("0", "false", "no", "off"):
        return False
    raise ValueError("expected true or false")


_STREAM_KEYS = {
    "stream": (_choice(STREAM_NAMES), None, "named generator"),
    "csv": (str, None, "CSV file to read instead of a generator"),
    "label": (str, None, "label column of --csv"),
    "label_map": (_choice(LABEL_MAPS), "first-seen", "how CSV labels become class indices"),
    "classes": (_positive_int, None, "declared class count for --csv"),
    "drift_position": (_positive_int, None, "item index of the drift centre"),
    "drift_width": (_positive_int, None, "drift width in items (1 = abrupt)"),
    "seed": (_nonneg_int, 0, "master seed"),
    "items": (_nonneg_int, None, "number of items"),
    "checkpoint_every": (_positive_int, 1000, "items between trace records"),
    "timing": (_flag, False, "record wall time (traces are then not reproducible)"),
}
_MODEL_KEYS = {
    "M": (_positive_int, 16, "maximum ensemble members"),
    "window": (_positive_int, 256, "window size B"),
    "alpha": (_positive_float, 0.1, "step size"),
    "max_depth": (_depth, 8, "shrub depth limit or 'none'"),
    "splitter": (_choice([s.value for s in Splitter]), "train", "split strategy"),
    "max_features": (_max_features, "all", "'all', 'sqrt' or a count"),
    "loss": (_choice([l.value for l in Loss]), "mse", "loss"),
    "train_every": (_positive_int, 1, "grow a shrub every k items"),
}
KEYS = {
    "run": {
        **_STREAM_KEYS,
        **_MODEL_KEYS,
        "trace": (str, "trace.jsonl", "trace output path"),
        "dump": (str, None, "write the final members as indented text"),
    },
    "sweep": {
        **_STREAM_KEYS,
        "loss": _MODEL_KEYS["loss"],
        "grid": (str, None, "JSON grid file (default: built-in grid)"),
        "n": (_positive_int, None, "number of sampled configurations"),
        "max_bytes": (_positive_int, None, "drop configs that ever exceed this size"),
        "jobs": (_positive_int, None, "worker processes (default: CPU count)"),
        "summary": (str, "summary.csv", "summary CSV path"),
        "front": (str, "front.csv", "Pareto front CSV path"),
    },
    "gen": {
        "stream": _STREAM_KEYS["stream"],
        "items": _STREAM_KEYS["items"],
        "seed": _STREAM_KEYS["seed"],
        "drift_position": _STREAM_KEYS["drift_position"],
        "drift_width": _STREAM_KEYS["drift_width"],
        "out": (str, "samples.csv", "output CSV path"),
    },
}
REQUIRED = {"run": ("items",), "sweep": ("items", "n"), "gen": ("stream", "items")}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise ConfigError(message)


def build_parser():
    parser = _Parser(prog="shrubs", description="Shrub Ensembles for data streams.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name, keys in KEYS.items():
        p = sub.add_parser(name)
        p.add_argument("--config", help="key=value settings file")
        for key, (_, default, help_text) in keys.items():
            flag = "--" + key.replace("_", "-")
            if default is not None:
                help_text = f"{help_text} (default: {default})"
            p.add_argument(flag, dest=key, default=None, help=help_text)
    return parser


def read_config_file(path):
    """Parse ``key=value`` lines into a dict of raw strings."""
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise IngestionError(f"cannot read config {path}: {exc.strerror or exc}") from exc
    out = {}
    for n, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {n}: expected key=value")
        key, value = (s.strip() for s in line.split("=", 1))
        out[key] = value
    return out


def resolve(command, file_values, flag_values):
    """Merge defaults, file and flags into typed settings."""
    keys = KEYS[command]
    for key in file_values:
        if key not in keys:
            raise ConfigError(f"unknown key {key!r}", key=key)
    raw = {**file_values, **{k: v for k, v in flag_values.items() if v is not None}}
    settings = {}
    for key, (parse, default, _) in keys.items():
        if key in raw:
            try:
                settings[key] = parse(raw[key])
            except ValueError as exc:
                raise ConfigError(f"invalid value {raw[key]!r}: {exc}", key=key) from None
        else:
            settings[key] = default
    for key in REQUIRED[command]:
        if settings[key] is None:
            raise ConfigError("missing required key", key=key)
    if "csv" in settings:
        if (settings["stream"] is None) == (settings["csv"] is None):
            raise ConfigError("give exactly one of stream or csv", key="stream")
        if settings["csv"] is not None and settings["label"] is None:
            raise ConfigError("csv input needs a label column", key="label")
    return settings


def _stream_spec(s):
    return StreamSpec(
        name=s["stream"],
        seed=s["seed"],
        n_items=s["items"],
        drift_position=s["drift_position"],
        drift_width=s["drift_width"],
        csv=s.get("csv"),
        label=s.get("label"),
        label_map=s.get("label_map", "first-seen"),
        n_classes=s.get("classes"),
    )


def _model_config(s, n_classes):
    try:
        return EnsembleConfig(
            n_classes=n_classes,
            max_members=s["M"],
            window_size=s["window"],
            step_size=s["alpha"],
            loss=s["loss"],
            shrub=ShrubConfig(
                max_depth=s["max_depth"],
                splitter=s["splitter"],
                max_features=s["max_features"],
            ),
            train_every=s["train_every"],
            seed=s["seed"],
        )
    except DomainError as exc:
        raise ConfigError(str(exc)) from None


def _check_max_features(value, n_features):
    if isinstance(value, int) and value > n_features:
        raise ConfigError(f"{value} exceeds the {n_features} features", key="max_features")


def _open_out(path):
    try:
        return open(path, "w", encoding="utf-8", newline="")
    except OSError as exc:
        raise IngestionError(f"cannot write {path}: {exc.strerror or exc}") from exc


def cmd_run(s):
    if s["items"] == 0:
        raise ConfigError("must be >= 1", key="items")
    spec = _stream_spec(s)
    stream = spec.open()
    d, C = stream.schema.n_features, stream.schema.n_classes
    config = _model_config(s, C)
    _check_max_features(s["max_features"], d)
    source = s["stream"] or s["csv"]
    print(f"# source={source} d={d} C={C} items={s['items']} seed={s['seed']}")
    model = ShrubEnsemble(config, d)
    with _open_out(s["trace"]) as fh:
        trace = test_then_train(
            model,
            stream,
            s["items"],
            s["checkpoint_every"],
            timing=s["timing"],
            on_record=lambda r: fh.write(r.to_json() + "\n"),
        )
    if trace.truncated:
        print(f"warning: input ended after {trace.items_seen} items", file=sys.stderr)
    if s["dump"] is not None:
        with _open_out(s["dump"]) as fh:
            for i, (shrub, w) in enumerate(zip(model.shrubs, model.weights)):
                fh.write(f"# member {i} weight {w!r} nodes {shrub.node_count()}\n")
                fh.write(shrub.dump() + "\n")
    print(
        f"final_acc={trace.final_accuracy:.6f} final_bytes={trace.final_bytes} "
        f"runtime_s={trace.runtime_seconds:.3f}"
    )
    return 0


def _load_grid(path):
    if path is None:
        return ConfigGrid.default()
    try:
        values = json.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as exc:
        raise IngestionError(f"cannot read grid {path}: {exc.strerror or exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"grid {path} is not valid JSON: {exc}", key="grid") from None
    if not isinstance(values, dict):
        raise ConfigError("grid must be a JSON object", key="grid")
    try:
        return ConfigGrid(values)
    except DomainError as exc:
        raise ConfigError(str(exc), key="grid") from None


def cmd_sweep(s):
    grid = _load_grid(s["grid"])
    if s["items"] == 0:
        raise ConfigError("must be >= 1", key="items")
    spec = _stream_spec(s)
    schema = spec.open().schema
    if "loss" not in grid.values:
        grid = ConfigGrid({**grid.values, "loss": [s["loss"]]})
    try:
        configs = sample_configs(grid, s["n"], s["seed"], n_classes=schema.n_classes)
        for c in configs:
            c.shrub.resolve_max_features(schema.n_features)
    except DomainError as exc:
        raise ConfigError(str(exc), key="grid") from None
    results = run_sweep(
        configs,
        spec,
        s["items"],
        s["checkpoint_every"],
        max_bytes=s["max_bytes"],
        jobs=s["jobs"] or os.cpu_count() or 1,
    )
    kept = [r for r in results if not r.dropped]
    front, apf = front_of(kept)
    params = [k for k in GRID_KEYS]
    with _open_out(s["summary"]) as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["config_id", *params, "final_acc", "avg_bytes", "final_bytes", "runtime_s"])
        for r in kept:
            w.writerow(
                [
                    r.config_id,
                    *(r.params[k] for k in params),
                    repr(r.final_accuracy),
                    repr(r.avg_bytes),
                    r.final_bytes,
                    f"{r.runtime_seconds:.3f}" if s["timing"] else "",
                ]
            )
    with _open_out(s["front"]) as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["config_id", "accuracy", "size_bytes"])
        for p in front:
            w.writerow([p.config_id, repr(p.accuracy), p.size_bytes])
    dropped = len(results) - len(kept)
    if dropped:
        print(f"warning: {dropped} of {len(results)} configs exceeded --max-bytes", file=sys.stderr)
    if not kept:
        print("warning: no configuration within budget; front is empty", file=sys.stderr)
    print(f"# source={s['stream'] or s['csv']} d={schema.n_features} C={schema.n_classes}")
    for r in kept:
        print(f"config {r.config_id}: final_acc={r.final_accuracy:.6f} avg_bytes={r.avg_bytes:.0f}")
    print(f"apf={apf!r}")
    return 0


def cmd_gen(s):
    spec = _stream_spec({**s, "csv": None})
    stream = spec.open()
    d = stream.schema.n_features
    with _open_out(s["out"]) as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow([f"f{i}" for i in range(d)] + ["label"])
        for _ in range(s["items"]):
            x, y = stream.next_sample()
            w.writerow([repr(float(v)) for v in x] + [int(y)])
    return 0


COMMANDS = {"run": cmd_run, "sweep": cmd_sweep, "gen": cmd_gen}


def main(argv=None):
    try:
        args = build_parser().parse_args(argv)
        values = vars(args)
        command = values.pop("command")
        config_path = values.pop("config")
        file_values = read_config_file(config_path) if config_path else {}
        settings = resolve(command, file_values, values)
        return COMMANDS[command](settings)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (IngestionError, OSError) as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
