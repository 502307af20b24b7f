#!/usr/bin/env python3

import os
import sys
import logging
import pathlib
import platform
import contextlib
from typing import Optional

import xdg_base_dirs as xdg

error_codes = {
    "Valid"           :   0,
    "Countermodel"    :   1, # also a rejected proof, or a bridge mismatch
    "ParsingError"    :   2, # "usage or input"
    "ConfigError"     :   2,
    "RunError"        :  70, # "internal"
    "GEpsteinError"   : 254,
    "Exception"       : 255,
}

SCHEMA_VERSION = 1


def config_directories(appname = "gepstein"):
    """Yield standard configuration directories (as defined by XDG under MacOS/Unix)."""
    system = platform.system()
    logging.debug(f"Detected OS: {system}")

    #NOTE: All matched config files will be parsed and applied in the given order.
    if system == "Windows":
        if "APPDATA" in os.environ:
            yield pathlib.Path(os.environ["APPDATA"])/pathlib.Path(appname)
        yield pathlib.Path("~")/pathlib.Path("AppData")/pathlib.Path("Roaming")/pathlib.Path(appname)

    elif system == "Java" or system == "":
        logging.warning(f"I don't know where to search for configuration files on platform `{system}`, I'll only search in current directory")

    else: # Probably an Unix flavor (Darwin, Linux, Solaris, IRIX, etc.)
        for p in xdg.xdg_config_dirs():
            yield p/appname
        yield xdg.xdg_config_home()/appname

    yield pathlib.Path(".")


def config_paths(appname = "gepstein"):
    """Yield any path named <appname>.yaml in standard configuration directories."""
    for p in config_directories(appname):
        yield str(p / (appname+".yaml"))


def check_file(filename):
    """Raise a ModelFileError if the given filename does not exist or is not readable."""
    from gepstein import exceptions
    if not os.path.isfile(filename):
        raise exceptions.ModelFileError(f"File `{filename}` not found.")
    if not os.access(filename, os.R_OK):
        raise exceptions.ModelFileError(f"Cannot access file `{filename}`.")


@contextlib.contextmanager
def reading(what):
    """Report any error raised while loading or fitting an input as an input error."""
    from gepstein import exceptions
    try:
        yield
    except exceptions.ParsingError:
        raise
    except exceptions.GEpsteinError as e:
        raise exceptions.InputError(f"Invalid {what}: {e}") from e


def make_parser(appname = "gepstein", config_files = None):
    import argparse
    import jsonargparse

    logger = logging.getLogger(appname)
    config_files = list(config_paths(appname)) if config_files is None else config_files

    do = jsonargparse.ArgumentParser(
        prog = appname,
        description = "Evaluate formulae in generalized Epstein models, search countermodels, check Hilbert proofs and bridge Kripke models.",
        epilog = f"Example usage:\n  {appname} check --logic PAI --goal '(p /\\ q) -> p'\n  {appname} prove --calculus lPAI --file proof.json\n  {appname} --format text axioms --calculus DAI",
        default_config_files = config_files,
        env_prefix = "GEPSTEIN",
        default_env = True,
        formatter_class = argparse.RawTextHelpFormatter,
        logger = logger,
    )

    do.add_argument("-c", "--config", metavar="FILE", action=jsonargparse.ActionConfigFile,
        help=f"The {appname} configuration file, which can host the same arguments than the command line tool. [default: {' or '.join(config_files)}]")

    do.add_argument("-l", "--log-level", default="WARNING",
        choices=['DEBUG', 'INFO', 'WARNING', 'ERROR', 'CRITICAL'],
        help="Configure the log level. [default: %(default)s]")

    do.add_argument("-f", "--format", default="json", choices=["json", "text"],
        help="Output format. [default: %(default)s]")

    logics = ["PAI0", "PAI", "lPAI", "DAI0", "DAI", "gD", "gdD", "gEq", "DAIbox"]
    calculi = logics + ["S4", "S4g"]

    def bounded(sub):
        sub.add_argument("-L", "--logic", default="PAI", choices=logics,
            help="The logic, fixing the models searched and the consequence relation. [default: %(default)s]")
        sub.add_argument("-g", "--goal", type=str, required=True,
            help="The formula to check.")
        sub.add_argument("-p", "--premise", type=str, nargs="*", default=[],
            help="Premises of the consequence.")
        sub.add_argument("-w", "--max-worlds", type=int, default=3,
            help="Largest frame searched (at most 4). [default: %(default)s]")
        sub.add_argument("-t", "--max-topics", type=int, default=4,
            help="Largest content algebra searched (at most 5, 3 for agnostic logics). [default: %(default)s]")
        sub.add_argument("-n", "--no-dedup", action="store_true",
            help="Enumerate every frame and algebra, not one per isomorphism class.")
        sub.add_argument("-s", "--shard", type=Optional[str], default=None,
            help="Search only the models of index ≡ i mod k, written `i/k`.")
        sub.add_argument("-j", "--jobs", type=int, default=0,
            help="Number of parallel workers, `0` meaning a sequential search. [default: %(default)s]")
        sub.add_argument("-b", "--budget", type=int, default=20_000_000,
            help="Largest number of models a search may enumerate. [default: %(default)s]")
        return sub

    commands = do.add_subcommands(dest="command")

    sub = jsonargparse.ArgumentParser(description="Parse formulae and print their canonical form.")
    sub.add_argument("-L", "--logic", default="PAI", choices=logics,
        help="The logic whose language is used. [default: %(default)s]")
    sub.add_argument("-F", "--formula", type=str, nargs="+", required=True, help="Formulae to parse.")
    commands.add_subcommand("parse", sub, help="Parse formulae.")

    sub = jsonargparse.ArgumentParser(description="Evaluate formulae in a model file.")
    sub.add_argument("-m", "--model", required=True, help="The model file (YAML or JSON).")
    sub.add_argument("-F", "--formula", type=str, nargs="+", required=True, help="Formulae to evaluate.")
    commands.add_subcommand("eval", sub, help="Evaluate formulae in a model.")

    commands.add_subcommand("check", bounded(jsonargparse.ArgumentParser(description="Check premises ⊨ goal up to bounds.")),
        help="Bounded validity or consequence checking.")

    sub = bounded(jsonargparse.ArgumentParser(description="Search a countermodel and print it as a model file."))
    sub.add_argument("-o", "--output", type=Optional[str], default=None, help="Also write the countermodel to this file.")
    commands.add_subcommand("countermodel", sub, help="Print the first countermodel.")

    sub = jsonargparse.ArgumentParser(description="Check a Hilbert-style proof.")
    sub.add_argument("-C", "--calculus", default="PAI", choices=calculi, help="The calculus. [default: %(default)s]")
    sub.add_argument("-i", "--file", required=True, help="The proof file (YAML document or JSON lines).")
    commands.add_subcommand("prove", sub, help="Check a proof.")

    sub = jsonargparse.ArgumentParser(description="Turn a Kripke model into the gE-model generated by a world, comparing forcing and evaluation.")
    sub.add_argument("-m", "--model", required=True, help="The Kripke model file.")
    sub.add_argument("-r", "--root", required=True, help="The root world.")
    sub.add_argument("-L", "--logic", type=Optional[str], default=None, help="PAI or lPAI for Fine models, PAI0 for Ferguson models.")
    sub.add_argument("-F", "--formula", type=str, nargs="*", default=[], help="Formulae to compare.")
    commands.add_subcommand("bridge", sub, help="Bridge a Kripke model.")

    sub = jsonargparse.ArgumentParser(description="Check the bundled derivations.")
    sub.add_argument("-I", "--inclusion", action="store_true", help="Also derive the variable inclusions over p, q up to depth 1.")
    commands.add_subcommand("corpus", sub, help="Run the derivation corpus.")

    sub = jsonargparse.ArgumentParser(description="List the axioms and rules of a calculus.")
    sub.add_argument("-C", "--calculus", default="PAI", choices=calculi, help="The calculus. [default: %(default)s]")
    commands.add_subcommand("axioms", sub, help="List a calculus.")

    return do


##########################################################################
# Commands.
##########################################################################

def _formulas(variant, texts, model = None):
    """Parse ground formulae, checking their atoms against a model if given."""
    import gepstein
    with reading("formula"):
        out = [variant.parse(t) for t in texts]
        for phi in out:
            metas = gepstein.formula.metavariables(phi)
            if metas:
                raise gepstein.exceptions.SubstitutionError(f"Metavariables {sorted(metas)} of `{gepstein.formula.to_text(phi)}` only belong in schemata.")
            if model is not None:
                model.covers(phi)
        return out


def do_parse(asked):
    import gepstein
    variant = gepstein.LogicVariant(asked.logic)
    out = []
    with reading("formula"):
        parsed = [variant.parse(t) for t in asked.formula]
    for t, phi in zip(asked.formula, parsed):
        out.append({
            "input": t,
            "formula": gepstein.formula.to_text(phi),
            "unicode": gepstein.formula.to_text(phi, unicode=True),
            "atoms": sorted(gepstein.formula.variables(phi)),
            "depth": gepstein.formula.depth(phi),
            "content": gepstein.formula.term_to_text(gepstein.formula.translate(phi, variant.translation_mode)),
        })
    text = "\n".join(f"{d['unicode']}\t{d['content']}" for d in out)
    return error_codes["Valid"], {"formulas": out}, text


def do_eval(asked):
    import gepstein
    check_file(asked.model)
    with reading("model"):
        M = gepstein.serialize.load_model(asked.model)
    out = []
    for t, phi in zip(asked.formula, _formulas(M.variant, asked.formula, M)):
        value = gepstein.ge_model.evaluate(M, phi)
        d = {"formula": gepstein.formula.to_text(phi), "value": value, "content": gepstein.ge_model.content(M, phi)}
        if M.truth.labels is not None:
            d["value_as_set"] = M.truth.as_set(value)
        d["true"] = value == M.truth.one
        out.append(d)
    text = "\n".join(f"{d['formula']}\t{d.get('value_as_set', d['value'])}\t{d['content']}" for d in out)
    return error_codes["Valid"], {"logic": M.variant.value, "results": out}, text


def _verdict(asked):
    import gepstein
    variant = gepstein.LogicVariant(asked.logic)
    premises = _formulas(variant, asked.premise)
    goal, = _formulas(variant, [asked.goal])
    shard = None if asked.shard is None else gepstein.search.parse_shard(asked.shard)
    bounds = gepstein.SearchBounds(max_worlds = asked.max_worlds, max_topics = asked.max_topics,
                                   dedup_iso = not asked.no_dedup, shard = shard, budget = asked.budget)
    return gepstein.search.check_validity(variant, premises, goal, bounds, asked.jobs)


def do_check(asked):
    import gepstein
    verdict = _verdict(asked)
    d = gepstein.serialize.verdict_to_dict(verdict)
    if verdict.valid:
        text = f"valid up to bounds ({verdict.examined} models)"
        return error_codes["Valid"], d, text
    text = f"countermodel at index {verdict.index}:\n" + gepstein.serialize.dump(d["countermodel"], "yaml")
    return error_codes["Countermodel"], d, text


def do_countermodel(asked):
    import gepstein
    verdict = _verdict(asked)
    if verdict.valid:
        return error_codes["Valid"], {"valid": True, "examined": verdict.examined}, "no countermodel"
    d = gepstein.serialize.model_to_dict(verdict.countermodel)
    if verdict.witness is not None:
        d["witness"] = verdict.witness
    if asked.output:
        with open(asked.output, "w") as fd:
            fd.write(gepstein.serialize.dump(d, "json"))
        logging.info(f"Countermodel written to `{asked.output}`")
    return error_codes["Countermodel"], d, gepstein.serialize.dump(d, "yaml")


def do_prove(asked):
    import gepstein
    check_file(asked.file)
    calc = gepstein.calculus.calculus(asked.calculus)
    with reading("proof"):
        proof = gepstein.serialize.load_proof(asked.file, calc)
    check = gepstein.calculus.check_proof(calc, proof.premises, proof)
    d = gepstein.serialize.proof_check_to_dict(check)
    code = error_codes["Valid"] if check.ok else error_codes["Countermodel"]
    return code, d, str(check)


def do_bridge(asked):
    import gepstein
    check_file(asked.model)
    with reading("Kripke model"):
        K = gepstein.serialize.load_kripke(asked.model)
    with reading("root or logic"):
        if asked.logic is not None and asked.logic not in [v.value for v in gepstein.LogicVariant]:
            raise gepstein.exceptions.VariantError(f"Unknown logic `{asked.logic}`.")
        label = K.frame.worlds[K.frame.index(asked.root)]
        M = gepstein.kripke.to_ge_model(K, asked.root, asked.logic)
    stable = gepstein.kripke.content_stable(K, asked.root)
    results = []
    for phi in _formulas(M.variant, asked.formula, M):
        forced = gepstein.kripke.forces(K, asked.root, phi)
        bridged = label in M.truth.as_set(gepstein.ge_model.evaluate(M, phi))
        results.append({"formula": gepstein.formula.to_text(phi), "forced": forced, "bridged": bridged, "agree": forced == bridged})
    d = {"root": label, "content_stable": stable.ok, "model": gepstein.serialize.model_to_dict(M), "results": results}
    if not stable.ok:
        d["instability"] = str(stable)
    text = "\n".join(f"{r['formula']}\tforced: {r['forced']}\tbridged: {r['bridged']}" for r in results)
    code = error_codes["Valid"] if all(r["agree"] for r in results) else error_codes["Countermodel"]
    return code, d, text


def do_corpus(asked):
    import gepstein
    items = gepstein.calculus.derivation_corpus() + gepstein.calculus.necessitation_fixtures()
    if asked.inclusion:
        items += gepstein.calculus.inclusion_corpus()
    out = []
    for item in items:
        check = gepstein.calculus.check_proof(item.calculus, item.premises, item.proof)
        got = None if check.ok else check.rejection.reason
        out.append({"name": item.name, "calculus": item.calculus, "lines": len(item.proof),
                    "expected": "ok" if item.expect is None else item.expect.value,
                    "got": "ok" if got is None else got.value,
                    "as_expected": got == item.expect})
    text = "\n".join(f"{'PASS' if d['as_expected'] else 'FAIL'}\t{d['calculus']}\t{d['name']}\t{d['got']}" for d in out)
    code = error_codes["Valid"] if all(d["as_expected"] for d in out) else error_codes["Countermodel"]
    return code, {"items": out}, text


def do_axioms(asked):
    import gepstein
    calc = gepstein.calculus.calculus(asked.calculus)
    axioms = [{"name": name, "schema": gepstein.formula.to_text(s, unicode=True), "text": gepstein.calculus.SCHEMATA[name]}
              for name, s in gepstein.calculus.axioms_of(calc)]
    rules = sorted(r.value for r in calc.rules)
    text = "\n".join(f"({a['name']})\t{a['text']}" for a in axioms) + "\nRules: " + ", ".join(rules)
    return error_codes["Valid"], {"calculus": calc.name, "axioms": axioms, "rules": rules}, text


commands = {
    "parse": do_parse,
    "eval": do_eval,
    "check": do_check,
    "countermodel": do_countermodel,
    "prove": do_prove,
    "bridge": do_bridge,
    "corpus": do_corpus,
    "axioms": do_axioms,
}


def main(argv = None):
    """Run the command line tool, returning its exit code."""
    import json

    appname = "gepstein"
    do = make_parser(appname)
    try:
        asked = do.parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else error_codes["ParsingError"]

    logging.basicConfig(format = "%(levelname)s: %(message)s", stream = sys.stderr)
    logging.getLogger().setLevel(asked.log_level)
    logger = logging.getLogger(appname)
    logger.info(f"{appname} {asked.command}")
    logger.debug(f"    parameters: {asked[asked.command]}")

    # Late import to keep --help fast.
    import gepstein

    try:
        code, data, text = commands[asked.command](asked[asked.command])
    # Manage exceptions with specific error codes:
    except gepstein.exceptions.ParsingError as e:
        logger.error(f"ERROR in input: {e}")
        return error_codes["ParsingError"]
    except gepstein.exceptions.ConfigError as e:
        logger.error(f"ERROR in configuration: {e}")
        return error_codes["ConfigError"]
    except gepstein.exceptions.RunError as e:
        logger.error(f"ERROR while running: {e}")
        return error_codes["RunError"]
    except gepstein.exceptions.GEpsteinError as e:
        logger.error(f"ERROR: {e}")
        return error_codes["GEpsteinError"]
    except Exception as e:
        logger.error(f"UNKNOWN ERROR: {e}")
        return error_codes["Exception"]

    if asked.format == "json":
        print(json.dumps({"schema_version": SCHEMA_VERSION, "command": asked.command, **data}, indent=2, ensure_ascii=False))
    else:
        print(text)
    logger.info("Done")
    return code


if __name__ == "__main__":
    sys.exit(main())
