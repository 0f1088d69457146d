"""Batch front end: JSON config in, CSV/JSON artifacts plus manifest out.

One command per process.  Exit codes: 0 success, 2 config validation
failure (nothing written), 3 numerical failure.  Every successful run
writes a manifest.json recording the command, a sha256 of the canonical
config, the library version, the produced files, and any accuracy
warnings raised along the way.  Outputs are deterministic for a fixed
config: floats are printed with repr-faithful %.17g and JSON keys are
sorted, so reruns are byte-identical.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
import warnings

import jsonschema
import numpy as np

from . import __version__
from .errors import GridConfigError, OrderError, SppsError
from .grid import Grid, GridFunction, read_csv, sample, write_csv
from .jets import Jet
from .recint import build_family
from .seeds import get_seed
from .series import (choose_truncation, u1_grid, u1_prime_grid, u2_grid,
                     u2_prime_grid)
from .sturm import SlProblem, build_seed, find_eigenvalues
from .gentaylor import least_squares_project
from .transform import build_A_recursive, solution_taylor_vectors

SCHEMA_VERSION = 1

CONFIG_SCHEMA = {
    "type": "object",
    "required": ["schema_version", "command"],
    "properties": {
        "schema_version": {"const": SCHEMA_VERSION},
        "command": {"enum": ["basis", "solve", "eigs", "taylor", "approx"]},
        "output_dir": {"type": "string"},
        "grid": {
            "type": "object",
            "required": ["a", "b"],
            "properties": {
                "a": {"type": "number"},
                "b": {"type": "number"},
                "n_nodes": {"type": "integer", "minimum": 5},
                "x0": {"type": "number"},
            },
            "additionalProperties": False,
        },
        "seed": {
            "type": "object",
            "required": ["kind"],
            "properties": {
                "kind": {"enum": ["builtin", "from_q", "csv"]},
                "name": {"type": "string"},
                "parameters": {"type": "object"},
                "path": {"type": "string"},
            },
            "additionalProperties": False,
        },
        "q": {
            "type": "object",
            "required": ["kind"],
            "properties": {
                "kind": {"enum": ["constant", "csv"]},
                "value": {"type": "number"},
                "path": {"type": "string"},
            },
            "additionalProperties": False,
        },
        "family_order": {"type": "integer", "minimum": 1},
        "basis": {
            "type": "object",
            "properties": {"max_order": {"type": "integer", "minimum": 0}},
            "additionalProperties": False,
        },
        "solve": {
            "type": "object",
            "properties": {
                "lambda": {"anyOf": [
                    {"type": "number"},
                    {"type": "array", "items": {"type": "number"},
                     "minItems": 2, "maxItems": 2},
                ]},
                "n_terms": {"type": "integer", "minimum": 1},
                "tol": {"type": "number", "exclusiveMinimum": 0},
                "fail_on_cap": {"type": "boolean"},
            },
            "required": ["lambda"],
            "additionalProperties": False,
        },
        "eigs": {
            "type": "object",
            "required": ["bc_left", "bc_right", "range"],
            "properties": {
                "bc_left": {"type": "array", "items": {"type": "number"},
                            "minItems": 2, "maxItems": 2},
                "bc_right": {"type": "array", "items": {"type": "number"},
                             "minItems": 2, "maxItems": 2},
                "range": {"type": "array", "items": {"type": "number"},
                          "minItems": 2, "maxItems": 2},
                "scan_points": {"type": "integer", "minimum": 2},
                "tol": {"type": "number", "exclusiveMinimum": 0},
                "series_tol": {"type": "number", "exclusiveMinimum": 0},
                "dump_scan": {"type": "boolean"},
            },
            "additionalProperties": False,
        },
        "taylor": {
            "type": "object",
            "required": ["n"],
            "properties": {
                "n": {"type": "integer", "minimum": 0},
                "x0": {"type": "number"},
                "jet_order": {"type": "integer", "minimum": 0},
            },
            "additionalProperties": False,
        },
        "approx": {
            "type": "object",
            "required": ["target", "orders"],
            "properties": {
                "target": {
                    "type": "object",
                    "required": ["kind"],
                    "properties": {
                        "kind": {"enum": ["builtin", "csv"]},
                        "name": {"enum": ["identity", "abs", "constant", "exp"]},
                        "parameters": {"type": "object"},
                        "path": {"type": "string"},
                    },
                    "additionalProperties": False,
                },
                "which": {"enum": ["even", "odd", "full"]},
                "orders": {"type": "array", "minItems": 1,
                           "items": {"type": "integer", "minimum": 0}},
            },
            "additionalProperties": False,
        },
    },
    "additionalProperties": False,
}


class ConfigError(Exception):
    """Config failed validation; maps to exit code 2."""


def _fmt(x: float) -> str:
    return f"{float(x):.17g}"


def _load_config(path: str) -> dict:
    try:
        with open(path) as fh:
            cfg = json.load(fh)
    except OSError as e:
        raise ConfigError(f"cannot read config: {e}") from None
    except json.JSONDecodeError as e:
        raise ConfigError(f"malformed JSON in {path}: {e}") from None
    try:
        jsonschema.validate(cfg, CONFIG_SCHEMA)
    except jsonschema.ValidationError as e:
        where = "/".join(str(p) for p in e.absolute_path) or "<root>"
        raise ConfigError(f"config invalid at {where}: {e.message}") from None
    return cfg


def _config_hash(cfg: dict) -> str:
    canon = json.dumps(cfg, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canon.encode()).hexdigest()


def _resolve(path: str, base: str) -> str:
    return path if os.path.isabs(path) else os.path.join(base, path)


class _Run:
    """Shared state for one command execution."""

    def __init__(self, cfg: dict, config_dir: str, out_dir: str, verbose: bool):
        self.cfg = cfg
        self.config_dir = config_dir
        self.out_dir = out_dir
        self.verbose = verbose
        self.files: list[str] = []

    def say(self, msg: str) -> None:
        if self.verbose:
            print(msg)

    def path(self, name: str) -> str:
        self.files.append(name)
        return os.path.join(self.out_dir, name)

    # -- config pieces ----------------------------------------------------

    def grid(self, force_x0_left: bool = False) -> Grid:
        block = self.cfg.get("grid")
        if block is None:
            raise ConfigError(f"command {self.cfg['command']!r} needs a grid block")
        x0 = block.get("x0", block["a"])
        if force_x0_left and x0 != block["a"]:
            raise ConfigError("eigenproblems require x0 = a")
        try:
            return Grid(block["a"], block["b"], block.get("n_nodes", 5001), x0=x0)
        except GridConfigError as e:
            raise ConfigError(f"bad grid: {e}") from None

    def q_function(self, grid: Grid) -> GridFunction:
        block = self.cfg.get("q")
        if block is None:
            raise ConfigError("this configuration needs a q block")
        if block["kind"] == "constant":
            if "value" not in block:
                raise ConfigError("q of kind constant needs a value")
            return GridFunction(grid, np.full(grid.n_nodes, float(block["value"])))
        gf = read_csv(_resolve(block["path"], self.config_dir), x0=grid.x0)
        if gf.grid != grid:
            raise ConfigError("q CSV grid does not match the config grid")
        return gf

    def seed_function(self, grid: Grid) -> GridFunction:
        block = self.cfg.get("seed")
        if block is None:
            raise ConfigError("this configuration needs a seed block")
        kind = block["kind"]
        if kind == "builtin":
            if "name" not in block:
                raise ConfigError("builtin seed needs a name")
            try:
                seed = get_seed(block["name"], **block.get("parameters", {}))
            except ValueError as e:
                raise ConfigError(str(e)) from None
            return sample(seed.func, grid)
        if kind == "csv":
            gf = read_csv(_resolve(block["path"], self.config_dir), x0=grid.x0)
            if gf.grid != grid:
                raise ConfigError("seed CSV grid does not match the config grid")
            return gf
        return build_seed(self.q_function(grid))

    def family(self, grid: Grid):
        f = self.seed_function(grid)
        return build_family(f, self.cfg.get("family_order", 60))

    # -- output helpers -----------------------------------------------------

    def write_json(self, name: str, obj) -> None:
        with open(self.path(name), "w") as fh:
            json.dump(obj, fh, indent=2, sort_keys=True)
            fh.write("\n")

    def write_rows(self, name: str, header: list[str], rows) -> None:
        with open(self.path(name), "w", newline="") as fh:
            fh.write(",".join(header) + "\n")
            for row in rows:
                fh.write(",".join(_fmt(v) for v in row) + "\n")


def _block(cfg: dict) -> dict:
    cmd = cfg["command"]
    block = cfg.get(cmd)
    if block is None:
        raise ConfigError(f"command {cmd!r} needs a {cmd!r} config block")
    return block


def _cmd_basis(run: _Run) -> None:
    cfg = run.cfg
    grid = run.grid()
    family = run.family(grid)
    block = cfg.get("basis", {})
    kmax = block.get("max_order", min(family.N, 10))
    if kmax > family.N:
        raise ConfigError(f"basis max_order {kmax} exceeds family_order {family.N}")
    for k in range(kmax + 1):
        write_csv(family.psi(k), run.path(f"psi_{k:03d}.csv"))
    run.say(f"wrote psi_0..psi_{kmax} on {grid!r}")


def _parse_lambda(raw) -> complex:
    if isinstance(raw, list):
        return complex(raw[0], raw[1])
    return complex(raw)


def _cmd_solve(run: _Run) -> None:
    block = _block(run.cfg)
    grid = run.grid()
    family = run.family(grid)
    lam = _parse_lambda(block["lambda"])
    if "n_terms" in block:
        n_terms = block["n_terms"]
    else:
        choice = choose_truncation(family, lam, block.get("tol", 1e-12))
        if choice.capped and block.get("fail_on_cap", False):
            raise OrderError(
                f"truncation capped at {choice.n_terms} terms without "
                f"meeting tol; fail_on_cap is set")
        n_terms = choice.n_terms
    cols = [
        u1_grid(family, lam, n_terms), u1_prime_grid(family, lam, n_terms),
        u2_grid(family, lam, n_terms), u2_prime_grid(family, lam, n_terms),
    ]
    rows = (
        (x, c0.real, c0.imag, c1.real, c1.imag, c2.real, c2.imag, c3.real, c3.imag)
        for x, c0, c1, c2, c3 in zip(
            grid.nodes, *(np.asarray(c.values, dtype=complex) for c in cols))
    )
    run.write_rows(
        "solution.csv",
        ["x", "u1_re", "u1_im", "u1p_re", "u1p_im",
         "u2_re", "u2_im", "u2p_re", "u2p_im"],
        rows)
    run.say(f"solved at lambda={lam} with {n_terms} terms")


def _cmd_eigs(run: _Run) -> None:
    block = _block(run.cfg)
    grid = run.grid(force_x0_left=True)
    q = run.q_function(grid)
    if run.cfg.get("seed") is None:
        f = build_seed(q)
        family = build_family(f, run.cfg.get("family_order", 60))
    else:
        family = run.family(grid)
    try:
        problem = SlProblem(q, tuple(block["bc_left"]), tuple(block["bc_right"]))
        result = find_eigenvalues(
            problem, family, block["range"],
            scan_points=block.get("scan_points", 256),
            tol=block.get("tol", 1e-10),
            series_tol=block.get("series_tol", 1e-12))
    except SppsError:
        raise
    except ValueError as e:
        # degenerate boundary data or a bad range are config problems
        raise ConfigError(str(e)) from None
    run.write_json("eigenvalues.json", {
        "eigenvalues": [[float(np.real(v)), float(np.imag(v))]
                        for v in result.eigenvalues],
        "residuals": [float(r) for r in result.residuals],
        "truncations": [int(t) for t in result.truncations],
    })
    if block.get("dump_scan", False):
        run.write_rows(
            "scan.csv", ["lambda", "phi_re", "phi_im"],
            ((l, p.real, p.imag)
             for l, p in zip(result.scan_lams, result.scan_phi)))
    run.say(f"found {len(result)} eigenvalues in {block['range']}")


def _cmd_taylor(run: _Run) -> None:
    cfg = run.cfg
    block = _block(cfg)
    n = block["n"]
    jet_order = block.get("jet_order", max(n - 1, 0))
    if jet_order < n - 1:
        raise ConfigError(f"jet_order {jet_order} cannot build a matrix of order {n}")
    seed_block = cfg.get("seed")
    if seed_block is None:
        raise ConfigError("taylor needs a seed block")
    if seed_block["kind"] == "builtin":
        if "x0" not in block:
            raise ConfigError("taylor with a builtin seed needs an x0")
        try:
            seed = get_seed(seed_block["name"], **seed_block.get("parameters", {}))
            phi_jet = seed.phi_jet(block["x0"], jet_order)
        except ValueError as e:
            raise ConfigError(str(e)) from None
    else:
        grid = run.grid()
        if "x0" in block and block["x0"] != grid.x0:
            raise ConfigError("taylor x0 must equal the grid anchor for "
                              "sampled seeds")
        f = run.seed_function(grid)
        phi_jet = Jet.from_grid(f * f, jet_order)
    A = build_A_recursive(phi_jet, n)
    header = []
    for m in range(n + 1):
        header += [f"a{m}_re", f"a{m}_im"]
    rows = []
    for k in range(n + 1):
        row = []
        for m in range(n + 1):
            row += [A.entries[k, m].real, A.entries[k, m].imag]
        rows.append(row)
    run.write_rows("matrix.csv", header, rows)
    u1_vec, u2_vec = solution_taylor_vectors(A)
    run.write_json("taylor_vectors.json", {
        "u1_over_f": [[[c.real, c.imag] for c in p.coeffs] for p in u1_vec],
        "u2_over_f": [[[c.real, c.imag] for c in p.coeffs] for p in u2_vec],
    })
    run.say(f"built transformation matrix of order {n}")


def _target_fn(name: str, p: dict):
    if name == "identity":
        return lambda x: np.asarray(x, dtype=float)
    if name == "abs":
        return np.abs
    if name == "constant":
        if "value" not in p:
            raise ConfigError("constant target needs parameters.value")
        v = float(p["value"])
        return lambda x: np.full_like(np.asarray(x, dtype=float), v)
    c = float(p.get("c", 1.0))
    return lambda x: np.exp(c * np.asarray(x, dtype=float))


def _cmd_approx(run: _Run) -> None:
    block = _block(run.cfg)
    grid = run.grid()
    family = run.family(grid)
    target = block["target"]
    if target["kind"] == "builtin":
        if "name" not in target:
            raise ConfigError("builtin target needs a name")
        fn = _target_fn(target["name"], target.get("parameters", {}))
        h = sample(fn, grid)
    else:
        h = read_csv(_resolve(target["path"], run.config_dir), x0=grid.x0)
        if h.grid != grid:
            raise ConfigError("target CSV grid does not match the config grid")
    which = block.get("which", "full")
    rows = []
    for N in block["orders"]:
        if N > family.N:
            raise ConfigError(f"approx order {N} exceeds family_order {family.N}")
        r = least_squares_project(h, family, N, which)
        rows.append((N, r.l2_error, r.max_error, r.condition_estimate))
    run.write_rows(
        "decay.csv", ["N", "l2_error", "max_error", "condition_estimate"], rows)
    run.say(f"projected target onto {which} basis at {len(rows)} orders")


_COMMANDS = {
    "basis": _cmd_basis,
    "solve": _cmd_solve,
    "eigs": _cmd_eigs,
    "taylor": _cmd_taylor,
    "approx": _cmd_approx,
}


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="spps",
        description="Recursive-integral bases, series solutions, and "
                    "Sturm-Liouville eigenvalues, driven by a JSON config.")
    parser.add_argument("--config", required=True, help="path to JSON config")
    parser.add_argument("--out", help="output directory (overrides config)")
    parser.add_argument("--verbose", action="store_true")
    args = parser.parse_args(argv)

    try:
        cfg = _load_config(args.config)
        config_dir = os.path.dirname(os.path.abspath(args.config))
        out_dir = args.out or cfg.get("output_dir")
        if not out_dir:
            raise ConfigError("no output directory (config output_dir or --out)")
        out_dir = _resolve(out_dir, config_dir)
    except ConfigError as e:
        print(f"config error: {e}", file=sys.stderr)
        return 2

    os.makedirs(out_dir, exist_ok=True)
    run = _Run(cfg, config_dir, out_dir, args.verbose)
    try:
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always")
            _COMMANDS[cfg["command"]](run)
    except ConfigError as e:
        print(f"config error: {e}", file=sys.stderr)
        return 2
    except SppsError as e:
        print(f"numerical failure: {e}", file=sys.stderr)
        return 3

    notes = []
    for w in caught:
        msg = str(w.message)
        if msg not in notes:
            notes.append(msg)
    manifest = {
        "schema_version": SCHEMA_VERSION,
        "command": cfg["command"],
        "config_sha256": _config_hash(cfg),
        "library_version": __version__,
        "files": sorted(run.files),
        "warnings": notes,
    }
    with open(os.path.join(out_dir, "manifest.json"), "w") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")
    run.say(f"manifest written to {out_dir}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
