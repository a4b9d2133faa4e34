"""Command-line front door.

Subcommands: measure, null-check, stymie, stymie-initial, verify, coevents,
stymied, spectrum, fixtures.  Outputs are machine-readable JSON (schema
qmt-hopper/1, big integers as decimal strings) unless --output asks for csv or
pretty text.  Exit codes: 0 ok, 1 verification failure, 2 parse error,
3 precondition violation, 4 limits exceeded.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass

import numpy as np

from . import _kernels as kernels
from . import coevents as coev
from . import spectral, stymie
from .errors import LimitExceededError, ParseError, PreconditionError
from .events import EVENT_T_CAP, TimeFiniteEvent
from .fixtures import all_fixtures, match_fixture, state_c, state_e
from .hopper import InitialState, Model
from .measure import EPS_NULL, is_null_universal, measure
from .stymie import StymieCertificate

SCHEMA = "qmt-hopper/1"


@dataclass
class RunConfig:
    output: str = "json"
    seed: int = 0
    eps_null: float = EPS_NULL
    eigen_tol: float = 1e-10
    m_max: int = stymie.M_MAX_DEFAULT
    big_m_max: int = stymie.BIG_M_MAX_DEFAULT
    materialize_cap: int = stymie.MATERIALIZE_CAP_DEFAULT
    lattice_cap: int = coev.LATTICE_CAP_DEFAULT
    t_cap: int = EVENT_T_CAP
    c_sq: float | None = None

    def __post_init__(self):
        if self.eps_null <= 0 or self.eigen_tol <= 0:
            raise PreconditionError("tolerances must be positive")
        limits = (self.m_max, self.big_m_max, self.materialize_cap, self.lattice_cap, self.t_cap)
        if min(limits) < 1:
            raise PreconditionError("limits must be >= 1")


def _load_json(path: str) -> dict:
    try:
        with open(path) as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc


def _load_event(path: str, t_cap: int = EVENT_T_CAP) -> TimeFiniteEvent:
    obj = _load_json(path)
    try:
        event = TimeFiniteEvent.from_json(obj)
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, PreconditionError):
            raise
        raise ParseError(f"bad event file {path}: {exc}") from exc
    if event.t > t_cap:
        raise LimitExceededError(f"event time {event.t} exceeds the cap {t_cap}")
    return event


def _load_state(path: str) -> InitialState:
    obj = _load_json(path)
    try:
        return InitialState.from_json(obj)
    except (KeyError, TypeError) as exc:
        raise ParseError(f"bad state file {path}: {exc}") from exc


def _emit(payload: dict, cfg: RunConfig, out) -> None:
    if cfg.output == "json":
        out.write(json.dumps(payload, sort_keys=True, indent=2) + "\n")
    elif cfg.output == "csv":
        rows = payload.get("csv_rows")
        if rows is None:
            out.write(json.dumps(payload, sort_keys=True, indent=2) + "\n")
        else:
            for row in rows:
                out.write(",".join(str(v) for v in row) + "\n")
    else:  # pretty
        for line in payload.get("pretty", [json.dumps(payload, sort_keys=True)]):
            out.write(line + "\n")


# -- subcommands ---------------------------------------------------------------


def _cmd_measure(args, cfg: RunConfig) -> tuple[int, dict]:
    event = _load_event(args.event, cfg.t_cap)
    psi = _load_state(args.state)
    res = measure(event, psi, c_sq=cfg.c_sq, eps_null=cfg.eps_null)
    payload = {"schema": SCHEMA, "seed": cfg.seed, **res.to_json()}
    label = match_fixture(event)
    if label:
        payload["fixture"] = label
    payload["pretty"] = [
        f"mu = {res.numeric:.12g} ({res.mode} mode)"
        + (f"  [bundled event {label}]" if label else ""),
        f"exactly zero: {res.is_zero}" if not res.thresholded else f"below {cfg.eps_null}: {res.is_zero}",
    ]
    return 0, payload


def _cmd_null_check(args, cfg: RunConfig) -> tuple[int, dict]:
    event = _load_event(args.event, cfg.t_cap)
    if args.state and not args.universal:
        psi = _load_state(args.state)
        res = measure(event, psi, eps_null=cfg.eps_null)
        payload = {
            "schema": SCHEMA,
            "null": res.is_zero,
            "universal": False,
            **res.to_json(),
        }
    else:
        payload = {
            "schema": SCHEMA,
            "null": is_null_universal(event),
            "universal": True,
            "thresholded": False,
        }
    label = match_fixture(event)
    if label:
        payload["fixture"] = label
    payload["pretty"] = [
        f"null: {payload['null']} (universal: {payload['universal']})"
        + (f"  [bundled event {label}]" if label else "")
    ]
    return 0, payload


def _cmd_stymie(args, cfg: RunConfig) -> tuple[int, dict]:
    event = _load_event(args.event, cfg.t_cap)
    cert = stymie.build_null_superset(event, m_max=cfg.m_max)
    payload = cert.to_json()
    payload["pretty"] = [
        f"null superset found: horizon t = {cert.horizon} (m = {cert.m}),",
        f"added paths: {cert.added_total()}",
    ]
    if args.out:
        with open(args.out, "w") as fh:
            json.dump(cert.to_json(), fh, sort_keys=True, indent=2)
    return 0, payload


def _cmd_stymie_initial(args, cfg: RunConfig) -> tuple[int, dict]:
    event = _load_event(args.event, cfg.t_cap)
    psi = _load_state(args.state)
    cert = stymie.build_null_superset_initial(
        event, psi, args.i_check, m_max=cfg.m_max, big_m_max=cfg.big_m_max
    )
    payload = cert.to_json()
    payload["pretty"] = [
        f"null superset found: horizons t = {cert.t_mid}, T = {cert.horizon}",
        f"added paths: {cert.added_total()}",
    ]
    if args.out:
        with open(args.out, "w") as fh:
            json.dump(cert.to_json(), fh, sort_keys=True, indent=2)
    return 0, payload


def _cmd_verify(args, cfg: RunConfig) -> tuple[int, dict]:
    cert = StymieCertificate.from_json(_load_json(args.certificate))
    ok = stymie.verify_certificate(cert, materialize_cap=cfg.materialize_cap)
    payload = {"schema": SCHEMA, "verified": ok, "pretty": [f"verified: {ok}"]}
    return (0 if ok else 1), payload


def _system_from_args(args, cfg: RunConfig) -> coev.TruncatedSystem:
    model = Model(args.n)
    if args.weights:
        weights = _load_json(args.weights)
        if not isinstance(weights, list):
            raise ParseError("weights file must hold a JSON list")
        return coev.classical_system(model, args.t_max, weights, lattice_cap=cfg.lattice_cap)
    if not args.state:
        raise ParseError("need --state or --weights")
    return coev.quantum_system(
        model, args.t_max, _load_state(args.state), lattice_cap=cfg.lattice_cap
    )


def _cmd_coevents(args, cfg: RunConfig) -> tuple[int, dict]:
    sys_ = _system_from_args(args, cfg)
    supports = coev.minimal_preclusive_supports(sys_)
    listed = [
        [list(map(int, sys_.paths[r])) for r in sorted(c.support)] for c in supports
    ]
    payload = {
        "schema": SCHEMA,
        "n": args.n,
        "t_max": args.t_max,
        "minimal_supports": listed,
        "csv_rows": [
            [i] + ["".join(map(str, p)) for p in sup] for i, sup in enumerate(listed)
        ],
        "pretty": [f"{len(listed)} minimal preclusive supports"]
        + [" ".join("".join(map(str, p)) for p in sup) for sup in listed],
    }
    return 0, payload


def _cmd_stymied(args, cfg: RunConfig) -> tuple[int, dict]:
    sys_ = _system_from_args(args, cfg)
    event = _load_event(args.event, cfg.t_cap)
    mask = sys_.event_mask(event)
    hit, witness = coev.is_stymied(mask, sys_)
    payload = {"schema": SCHEMA, "stymied": hit}
    if hit:
        payload["witness_paths"] = [list(p) for p in sys_.mask_paths(witness)]
    payload["pretty"] = [f"stymied: {hit}"]
    return 0, payload


def _cmd_spectrum(args, cfg: RunConfig) -> tuple[int, dict]:
    model = Model(args.n)
    eig = spectral.eigensystem(model)
    u = spectral.transfer_matrix(model)
    residual = max(
        float(np.linalg.norm(u @ v - lam * v)) for lam, v in eig
    )
    if residual > cfg.eigen_tol:
        raise PreconditionError(f"eigen residual {residual} above {cfg.eigen_tol}")
    facts = spectral.periodicity_class(model)
    payload = {
        "schema": SCHEMA,
        "n": args.n,
        "eigenvalues": [
            {"j": j, "re": lam.real, "im": lam.imag} for j, (lam, _) in enumerate(eig)
        ],
        "eigenvector_residual_max": residual,
        "periodicity": facts,
        "csv_rows": [[j, lam.real, lam.imag] for j, (lam, _) in enumerate(eig)],
        "pretty": [f"lambda_{j} = {lam:.12g}" for j, (lam, _) in enumerate(eig)]
        + [f"periodicity: {facts}"],
    }
    return 0, payload


def _cmd_fixtures(args, cfg: RunConfig) -> tuple[int, dict]:
    fx = all_fixtures()
    payload = {
        "schema": SCHEMA,
        "events": {name: ev.to_json() for name, ev in fx.items()},
        "states": {"C": state_c().to_json(), "E": state_e().to_json()},
    }
    if args.out_dir:
        os.makedirs(args.out_dir, exist_ok=True)
        for name, ev in fx.items():
            with open(os.path.join(args.out_dir, f"event_{name}.json"), "w") as fh:
                json.dump(ev.to_json(), fh, sort_keys=True, indent=2)
        for name, st in (("C", state_c()), ("E", state_e())):
            with open(os.path.join(args.out_dir, f"state_{name}.json"), "w") as fh:
                json.dump(st.to_json(), fh, sort_keys=True, indent=2)
    payload["pretty"] = [f"{name}: n={ev.model.n}, t={ev.t}, |paths|={len(ev)}" for name, ev in fx.items()]
    return 0, payload


# -- wiring ---------------------------------------------------------------------


def _build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="qmt-hopper", description=__doc__)
    ap.add_argument("--output", choices=["json", "csv", "pretty"], default="json")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--eps-null", type=float, default=EPS_NULL)
    ap.add_argument("--eigen-tol", type=float, default=1e-10)
    ap.add_argument("--m-max", type=int, default=stymie.M_MAX_DEFAULT)
    ap.add_argument("--big-m-max", type=int, default=stymie.BIG_M_MAX_DEFAULT)
    ap.add_argument("--materialize-cap", type=int, default=stymie.MATERIALIZE_CAP_DEFAULT)
    ap.add_argument("--t-cap", type=int, default=EVENT_T_CAP)
    ap.add_argument("--lattice-cap", type=int, default=coev.LATTICE_CAP_DEFAULT)
    ap.add_argument("--c-sq", type=float, default=None)
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("measure", help="quantum measure of an event")
    p.add_argument("--event", required=True)
    p.add_argument("--state", required=True)
    p.set_defaults(fn=_cmd_measure)

    p = sub.add_parser("null-check", help="nullity of an event")
    p.add_argument("--event", required=True)
    p.add_argument("--state")
    p.add_argument("--universal", action="store_true")
    p.set_defaults(fn=_cmd_null_check)

    p = sub.add_parser("stymie", help="build a null superset certificate")
    p.add_argument("--event", required=True)
    p.add_argument("--out")
    p.set_defaults(fn=_cmd_stymie)

    p = sub.add_parser("stymie-initial", help="null superset of an initial-position event")
    p.add_argument("--event", required=True)
    p.add_argument("--state", required=True)
    p.add_argument("--i-check", type=int, required=True)
    p.add_argument("--out")
    p.set_defaults(fn=_cmd_stymie_initial)

    p = sub.add_parser("verify", help="re-check a certificate from scratch")
    p.add_argument("--certificate", required=True)
    p.set_defaults(fn=_cmd_verify)

    p = sub.add_parser("coevents", help="minimal preclusive supports")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--t-max", type=int, required=True)
    p.add_argument("--state")
    p.add_argument("--weights")
    p.set_defaults(fn=_cmd_coevents)

    p = sub.add_parser("stymied", help="is the event inside some null event?")
    p.add_argument("--event", required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--t-max", type=int, required=True)
    p.add_argument("--state")
    p.add_argument("--weights")
    p.set_defaults(fn=_cmd_stymied)

    p = sub.add_parser("spectrum", help="eigensystem and periodicity facts")
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(fn=_cmd_spectrum)

    p = sub.add_parser("fixtures", help="dump the bundled example events")
    p.add_argument("--out-dir")
    p.set_defaults(fn=_cmd_fixtures)
    return ap


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    threads = os.environ.get("QMT_THREADS")
    if threads and kernels.ACTIVE_BACKEND == "numba":
        import numba

        numba.set_num_threads(max(1, min(int(threads), numba.config.NUMBA_NUM_THREADS)))
    try:
        args = _build_parser().parse_args(argv)
        cfg = RunConfig(
            output=args.output,
            seed=args.seed,
            eps_null=args.eps_null,
            eigen_tol=args.eigen_tol,
            m_max=args.m_max,
            big_m_max=args.big_m_max,
            materialize_cap=args.materialize_cap,
            lattice_cap=args.lattice_cap,
            t_cap=args.t_cap,
            c_sq=args.c_sq,
        )
        code, payload = args.fn(args, cfg)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except PreconditionError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except LimitExceededError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4
    if cfg.output != "pretty":
        payload.pop("pretty", None)
    if cfg.output != "csv":
        payload.pop("csv_rows", None)
    _emit(payload, cfg, out)
    return code


def entrypoint() -> None:
    sys.exit(main())
