import argparse
import logging
import sys

from dotenv import load_dotenv

import workflow
from utils import Utils

logger = logging.getLogger(__name__)


def build_parser():
    parser = argparse.ArgumentParser(
        prog="subord",
        description="Check sufficient conditions for Janowski differential subordinations.",
    )
    parser.add_argument("command", choices=list(workflow.ROUTES))
    parser.add_argument("--family", help="condition family, e.g. linear-deriv")
    parser.add_argument("--params", help="JSON file with parameter fields; flags override it")
    for name in ("A", "B", "D", "E"):
        parser.add_argument(f"--{name}", type=float)
    parser.add_argument("--starlike-order", type=float,
                        help="conclusion class S*(alpha): sets (A, B) = (1 - 2 alpha, -1)")
    parser.add_argument("--beta", help="complex, e.g. 2 or 1+0.5j")
    parser.add_argument("--alpha", type=float)
    parser.add_argument("--gamma", type=float)
    parser.add_argument("--k", type=int)
    parser.add_argument("--n-theta", type=int)
    parser.add_argument("--m-grid", type=float, nargs="+")
    parser.add_argument("--samples", type=int)
    parser.add_argument("--degree", type=int)
    parser.add_argument("--truncation", type=int)
    parser.add_argument("--seed", type=int)
    parser.add_argument("--radius", type=float)
    parser.add_argument("--grid", type=int)
    parser.add_argument("--leading-order", type=int)
    parser.add_argument("--variant", choices=["a", "b", "c", "i", "ii"])
    parser.add_argument("--series", help="JSON file of [re, im] coefficients of f")
    parser.add_argument("--points", type=int)
    parser.add_argument("--beta-grid", type=float, nargs="+")
    parser.add_argument("--gamma-grid", type=float, nargs="+")
    parser.add_argument("--explore", action="store_true", default=None,
                        help="run even when the condition fails; findings are reported, not asserted")
    parser.add_argument("--out", help="write the JSON report (or CSV for region commands) here")
    return parser


def main(argv=None):
    load_dotenv()
    utils = Utils()
    logging.basicConfig(level=utils.log_level, format="%(asctime)s [%(levelname)s] %(message)s")

    args = build_parser().parse_args(argv)
    try:
        config = workflow.RunConfig.from_mapping(vars(args), utils)
        result = workflow.run(config)
    except (ValueError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2

    if result.rows is not None:
        table = utils.format_csv(result.header, result.rows)
        if config.out:
            with open(config.out, "w", encoding="utf-8") as handle:
                handle.write(table)
            print(result.summary)
        else:
            sys.stdout.write(table)
        return result.exit_code

    print(result.summary)
    if config.out:
        utils.write_report(result.report, config.out)
    return result.exit_code


if __name__ == "__main__":
    sys.exit(main())
