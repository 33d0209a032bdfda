"""Command-line front end: inspect games, solve heuristically, certify
profiles, and run the grid labelling machinery on files.

Exit codes: 0 success (or verdict true), 1 verdict false, 2 input error,
3 method-specific failure (no convergence, grid too large, nothing found).
Reports are JSON with floats at 12 significant digits; identical inputs
and seeds produce byte-identical output.
"""

from __future__ import annotations

import argparse
import json
import math
import sys

import numpy as np

from .certify import Certificate, certify_profile, choose_d, _round_floats
from .game import (
    GameValidationError,
    load_game,
    load_profile,
    profile_to_dict,
    uniform_profile,
    validate_profile,
)
from .nash_map import apply_f, lipschitz_constant, residual
from .oracles import grid_residual_argmin, random_profile
from .simplicial import (
    InvalidSimplexError,
    classify_simplex,
    find_stopping_simplex,
    grid_point_count,
    grid_points,
    grid_profile_from_lists,
    label_point,
    simplex_from_dict,
    simplex_to_dict,
    simplex_vertices,
    GRID_ENUM_GUARD,
)

EXIT_OK = 0
EXIT_VERDICT_FALSE = 1
EXIT_INPUT_ERROR = 2
EXIT_METHOD_FAILURE = 3


def _emit(payload: dict) -> None:
    print(json.dumps(_round_floats(payload), indent=2, sort_keys=True))


def _target_inv_l(args) -> float | None:
    if args.target_L is None:
        return None
    if args.target_L < 1:
        raise GameValidationError("--target-L must be a positive integer")
    return 1.0 / args.target_L


def cmd_info(args) -> int:
    game = load_game(args.game)
    payload = {
        "num_players": game.num_players,
        "num_states": game.num_states,
        "num_actions": list(game.num_actions),
        "gamma": game.gamma,
        "r_max": game.r_max,
        "lambda": lipschitz_constant(game),
    }
    if args.target_L is not None:
        payload["L"] = args.target_L
        payload["d"] = choose_d(game, args.target_L)
    _emit(payload)
    return EXIT_OK


def _solve_damped_f(game, args):
    if args.seed is not None:
        pi = random_profile(game, np.random.default_rng(args.seed))
    else:
        pi = uniform_profile(game)
    status = "no-convergence"
    for _ in range(args.max_iters):
        nxt = apply_f(game, pi)
        if nxt.max_norm_distance(pi) <= args.tol:
            status = "converged"
            break
        blended = [
            (1.0 - args.damping) * a + args.damping * b
            for a, b in zip(pi.probs, nxt.probs)
        ]
        # renormalize away float drift before revalidating
        blended = [p / p.sum(axis=1, keepdims=True) for p in blended]
        pi = validate_profile(game, blended)
    return pi, status


def _solve_grid(game, args):
    point, _ = grid_residual_argmin(game, args.d)
    return point.to_profile(game), "converged"


def _solve_simplicial(game, args):
    found = find_stopping_simplex(game, args.d)
    if found is None:
        return None, "no-stopping-simplex"
    sigma, _ = found
    best = None
    best_res = math.inf
    for vertex in simplex_vertices(game, sigma):
        pi = vertex.to_profile(game)
        res = residual(game, pi)
        if res < best_res:
            best, best_res = pi, res
    return best, "converged"


def cmd_solve(args) -> int:
    game = load_game(args.game)
    if args.method == "damped-f":
        pi, status = _solve_damped_f(game, args)
    elif args.method == "grid":
        pi, status = _solve_grid(game, args)
    else:
        pi, status = _solve_simplicial(game, args)
    if pi is None:
        _emit({"method": args.method, "status": status})
        return EXIT_METHOD_FAILURE
    cert = certify_profile(game, pi, _target_inv_l(args))
    _emit(
        {
            "method": args.method,
            "status": status,
            "profile": profile_to_dict(pi),
            "certificate": cert.to_dict(),
        }
    )
    return _verdict_exit(cert, status)


def _verdict_exit(cert: Certificate, status: str) -> int:
    if cert.verdict is False:
        return EXIT_VERDICT_FALSE
    if cert.verdict is None and status != "converged":
        return EXIT_METHOD_FAILURE
    return EXIT_OK


def cmd_certify(args) -> int:
    game = load_game(args.game)
    pi = load_profile(game, args.profile)
    cert = certify_profile(game, pi, _target_inv_l(args))
    _emit(cert.to_dict())
    if cert.verdict is False:
        return EXIT_VERDICT_FALSE
    return EXIT_OK


def cmd_label(args) -> int:
    game = load_game(args.game)
    if args.simplex is not None:
        with open(args.simplex) as fh:
            sigma = simplex_from_dict(game, json.load(fh))
        cls = classify_simplex(game, sigma)
        payload = simplex_to_dict(game, sigma)
        payload["classification"] = cls.kind
        if cls.kind == "stopping":
            payload["stopping"] = [cls.stopping_player, cls.stopping_state]
        _emit(payload)
        return EXIT_OK
    if args.d is None:
        raise GameValidationError("--d is required when labelling grid points")
    if args.point is not None:
        with open(args.point) as fh:
            data = json.load(fh)
        points = [grid_profile_from_lists(game, data["numerators"], args.d)]
    else:
        if grid_point_count(game, args.d) > GRID_ENUM_GUARD:
            print("grid too large to label exhaustively", file=sys.stderr)
            return EXIT_METHOD_FAILURE
        points = list(grid_points(game, args.d))
    payload = {
        "d": args.d,
        "labels": [
            {"numerators": [arr.tolist() for arr in p.numerators],
             "label": list(label_point(game, p))}
            for p in points
        ],
    }
    _emit(payload)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sgcert",
        description="stochastic-game equilibrium evaluation and certification",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("info", help="print game dimensions and derived constants")
    p.add_argument("game")
    p.add_argument("--target-L", type=int, default=None)
    p.set_defaults(func=cmd_info)

    for name in ("solve", "search"):
        p = sub.add_parser(
            name,
            help="search for a low-residual profile and certify it"
            + (" (simplicial method)" if name == "search" else ""),
        )
        p.add_argument("game")
        if name == "solve":
            p.add_argument(
                "--method",
                choices=["damped-f", "grid", "simplicial"],
                default="damped-f",
            )
        p.add_argument("--d", type=int, default=2)
        p.add_argument("--damping", type=float, default=0.5)
        p.add_argument("--max-iters", type=int, default=10_000)
        p.add_argument("--tol", type=float, default=1e-9)
        p.add_argument("--seed", type=int, default=None)
        p.add_argument("--target-L", type=int, default=None)
        p.set_defaults(func=cmd_solve)
        if name == "search":
            p.set_defaults(method="simplicial")

    p = sub.add_parser("certify", help="certify a profile file against a game")
    p.add_argument("game")
    p.add_argument("profile")
    p.add_argument("--target-L", type=int, default=None)
    p.set_defaults(func=cmd_certify)

    p = sub.add_parser("label", help="label grid points or classify a simplex")
    p.add_argument("game")
    p.add_argument("--d", type=int, default=None)
    p.add_argument("--point", default=None, help="JSON file with grid numerators")
    p.add_argument("--simplex", default=None, help="JSON simplex document")
    p.set_defaults(func=cmd_label)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (GameValidationError, InvalidSimplexError, FileNotFoundError,
            json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT_ERROR
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_METHOD_FAILURE


if __name__ == "__main__":
    sys.exit(main())
