"""Command-line front end.

Results go to stdout as JSON, diagnostics to stderr.  Exit status: 0 success,
1 negative verdict, 2 usage error, 3 engine failure.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from . import core, subsemigroup as sub
from .core import Triple, parse_triple, parse_word
from .errors import EngineError
from .presentations import amalgam_presentation, conjugation_presentation, generator_letters
from .stephen import (
    EQUAL, Presentation, ProbeInstance, stephen_limit, theorem_c_probe, to_dot, words_equal,
)

EXIT_OK, EXIT_NEGATIVE, EXIT_USAGE, EXIT_ENGINE = 0, 1, 2, 3

log = logging.getLogger("fi1")


class UsageError(Exception):
    pass


def _load_json(path: str) -> dict:
    try:
        return json.loads(Path(path).read_text())
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path} is not valid JSON: {exc}") from None


def _spec(path: str) -> sub.SubsemigroupSpec:
    try:
        return sub.SubsemigroupSpec.from_json(_load_json(path))
    except (KeyError, TypeError, ValueError) as exc:
        raise UsageError(f"bad spec file {path}: {exc}") from None


def _triple(text: str) -> Triple:
    try:
        return parse_triple(text)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _word(text: str, alphabet=None):
    try:
        return parse_word(text, alphabet)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _presentation(path: str | None, *words: str) -> Presentation:
    if path is None:
        names: list[str] = []
        for w in words:
            for n in _word(w).alphabet:
                if n not in names:
                    names.append(n)
        return Presentation.free(names)
    try:
        return Presentation.from_json(_load_json(path))
    except (KeyError, TypeError, ValueError) as exc:
        raise UsageError(f"bad presentation file {path}: {exc}") from None


def _emit(obj) -> None:
    json.dump(obj, sys.stdout, indent=None, separators=(", ", ": "))
    sys.stdout.write("\n")


def _triple_json(t: Triple) -> dict:
    return {"triple": str(t), "components": list(t.signed())}


# --- subcommands ---------------------------------------------------------------

def cmd_canon(args) -> int:
    w = _word(args.word)
    try:
        t = core.eval_word(w)
    except core.UnassignedLetterError as exc:
        raise UsageError(f"{exc}; canon works over the single letter x") from None
    _emit({"word": str(w), **_triple_json(t)})
    return EXIT_OK


def cmd_mul(args) -> int:
    _emit(_triple_json(core.mul(_triple(args.u), _triple(args.v))))
    return EXIT_OK


def cmd_inv(args) -> int:
    _emit(_triple_json(core.inv(_triple(args.u))))
    return EXIT_OK


def cmd_leq(args) -> int:
    verdict = core.leq(_triple(args.u), _triple(args.v))
    _emit({"leq": verdict})
    return EXIT_OK if verdict else EXIT_NEGATIVE


def cmd_green(args) -> int:
    g = core.green(_triple(args.u))
    _emit({"rclass": list(g.rclass), "dindex": g.dindex})
    return EXIT_OK


def cmd_member(args) -> int:
    verdict = sub.member(_spec(args.spec), _triple(args.triple))
    _emit({"member": verdict})
    return EXIT_OK if verdict else EXIT_NEGATIVE


def cmd_closure(args) -> int:
    elems = sub.bounded_closure(_spec(args.spec), args.max_d)
    _emit({"max_d": args.max_d, "count": len(elems), "elements": [str(t) for t in elems]})
    return EXIT_OK


def cmd_params(args) -> int:
    _emit(sub.structure_params(_spec(args.spec)).to_json())
    return EXIT_OK


def cmd_es(args) -> int:
    desc = sub.idempotent_semilattice(_spec(args.spec), args.box)
    _emit({"box": args.box, "semilattice": desc.to_json(), "text": str(desc)})
    return EXIT_OK


def cmd_gens(args) -> int:
    trace, t2 = sub.theorem_a_generators(_spec(args.spec), args.box)
    _emit({"T1": [str(t) for t in trace.T1], "T2": [str(t) for t in t2], "trace": trace.to_json()})
    return EXIT_OK


def cmd_fg(args) -> int:
    spec = _spec(args.spec)
    kind, rest = sub.sbar_complement(spec, args.box)
    verdict = kind == "finite"
    out = {"finitely_generated": verdict, "box": args.box}
    if verdict:
        out["complement"] = [str(t) for t in rest]
    else:
        out["witness"] = rest.to_json()
        out["witness_text"] = str(rest)
    _emit(out)
    return EXIT_OK if verdict else EXIT_NEGATIVE


def cmd_stephen(args) -> int:
    pres = _presentation(args.pres, args.word)
    w = _word(args.word, pres.alphabet)
    g, converged = stephen_limit(w, pres, args.rounds)
    if args.dot:
        sys.stdout.write(to_dot(g))
    else:
        _emit({"converged": converged, "rounds": args.rounds, "graph": g.to_json()})
    return EXIT_OK


def cmd_eq(args) -> int:
    pres = _presentation(args.pres, args.w, args.v)
    verdict = words_equal(pres, _word(args.w, pres.alphabet), _word(args.v, pres.alphabet), args.rounds)
    _emit({"verdict": verdict})
    return EXIT_OK if verdict == EQUAL else EXIT_NEGATIVE


def _sbar_input(spec: sub.SubsemigroupSpec, path: str | None):
    if path is None:
        if len(spec.gens) == 1 and spec.idems is None:
            # a single non-idempotent generates a free monogenic copy
            return Presentation.free(tuple(generator_letters(spec.gens).values())), {}, {}
        raise UsageError("--sbar-pres is required unless the spec is one generator without idempotents")
    obj = _load_json(path)
    try:
        extra = {k: Triple.from_signed(*v) for k, v in obj.get("extra", {}).items()}
        return Presentation.from_json(obj), extra, dict(obj.get("extra_words", {}))
    except (KeyError, TypeError, ValueError) as exc:
        raise UsageError(f"bad presentation file {path}: {exc}") from None


def cmd_present(args) -> int:
    spec = _spec(args.spec)
    pres, extra, words = _sbar_input(spec, args.sbar_pres)
    try:
        if args.kind == "amalgam":
            built = amalgam_presentation(spec, pres, args.box, extra)
        else:
            built = conjugation_presentation(spec, pres, args.box, extra, words)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    out = built.to_json()
    if args.report:
        out["report"] = built.report()
    _emit(out)
    return EXIT_OK


def cmd_probe_c(args) -> int:
    try:
        inst = ProbeInstance.from_json(_load_json(args.instance))
    except (KeyError, TypeError, ValueError) as exc:
        raise UsageError(f"bad probe instance {args.instance}: {exc}") from None
    rep = theorem_c_probe(inst, args.rounds)
    _emit(rep.to_json())
    return EXIT_OK if rep.all_labels_above_f and not rep.g_label_seen else EXIT_NEGATIVE


# --- parser --------------------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _nonneg(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if v < 0:
        raise argparse.ArgumentTypeError("must be non-negative")
    return v


def _positive(text: str) -> int:
    v = _nonneg(text)
    if v == 0:
        raise argparse.ArgumentTypeError("must be positive")
    return v


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="fi1", description="Exact computations in the monogenic free inverse semigroup.")
    p.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    cmds = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, func, help_):
        sp = cmds.add_parser(name, help=help_)
        sp.set_defaults(func=func)
        return sp

    add("canon", cmd_canon, "canonical triple of a word over x").add_argument("word")
    sp = add("mul", cmd_mul, "product of two triples")
    sp.add_argument("u"); sp.add_argument("v")
    add("inv", cmd_inv, "inverse of a triple").add_argument("u")
    sp = add("leq", cmd_leq, "natural partial order u <= v")
    sp.add_argument("u"); sp.add_argument("v")
    add("green", cmd_green, "R-class and D-index").add_argument("u")

    sp = add("member", cmd_member, "exact membership in a subsemigroup")
    sp.add_argument("spec"); sp.add_argument("triple")
    sp = add("closure", cmd_closure, "all elements up to a D-index")
    sp.add_argument("spec"); sp.add_argument("--max-d", type=_nonneg, required=True)
    add("params", cmd_params, "structure parameters").add_argument("spec")
    sp = add("es", cmd_es, "the semilattice of idempotents, certified on a box")
    sp.add_argument("spec"); sp.add_argument("--box", type=_positive, required=True)
    sp = add("gens", cmd_gens, "finite generating set T1 and T2")
    sp.add_argument("spec"); sp.add_argument("--box", type=_positive)
    sp = add("fg", cmd_fg, "finite generation test")
    sp.add_argument("spec"); sp.add_argument("--box", type=_positive, required=True)

    sp = add("stephen", cmd_stephen, "bounded Stephen sequence of a word")
    sp.add_argument("word"); sp.add_argument("--pres")
    sp.add_argument("--rounds", type=_nonneg, required=True)
    sp.add_argument("--dot", action="store_true", help="emit Graphviz instead of JSON")
    sp = add("eq", cmd_eq, "word problem: equal, distinct or unknown")
    sp.add_argument("w"); sp.add_argument("v"); sp.add_argument("--pres")
    sp.add_argument("--rounds", type=_nonneg, required=True)
    sp = add("present", cmd_present, "truncated presentation of a subsemigroup")
    sp.add_argument("kind", choices=("amalgam", "conj")); sp.add_argument("spec")
    sp.add_argument("--box", type=_positive, required=True)
    sp.add_argument("--sbar-pres", help="presentation of the non-idempotent part (JSON)")
    sp.add_argument("--report", action="store_true", help="include the truncation ledger")
    sp = add("probe-c", cmd_probe_c, "idempotent edge-label probe")
    sp.add_argument("instance"); sp.add_argument("--rounds", type=_nonneg, required=True)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(f"fi1: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:  # --help
        return EXIT_OK if exc.code in (0, None) else EXIT_USAGE
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(name)s: %(message)s", stream=sys.stderr)
    try:
        return args.func(args)
    except (UsageError, ValueError) as exc:
        print(f"fi1: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (EngineError, OverflowError) as exc:
        print(f"fi1: engine error: {exc}", file=sys.stderr)
        return EXIT_ENGINE


if __name__ == "__main__":
    sys.exit(main())
