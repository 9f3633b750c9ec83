"""Tabulate exact expectation values on the two-cell partial-isometry graph.

Prints the rational value of the conditional expectation on a family of words
built from s = be1 al1* (powers of s and s*, and projections s^k s^{*k}),
cross-checking the single-cell cases against the ordinary-graph closed form.
Run with:

    python scripts/expectation_table.py [--max-power K]
"""

import argparse
import os
import sys

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

from sepgraph.algebra import LeavittContext, element_literal, parse_element
from sepgraph.expectation import cell_subgraph, expect, n_mu, phi_ordinary
from sepgraph.graphs import SeparatedGraph, forward_path


def build_graph():
    return SeparatedGraph(
        ["v", "w1", "w2", "w3"],
        [("al1", "v", "w1"), ("al2", "v", "w2"), ("be1", "v", "w1"), ("be2", "v", "w3")],
        {"v": [["al1", "al2"], ["be1", "be2"]]},
    )


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--max-power", type=int, default=4)
    args = parser.parse_args()

    graph = build_graph()
    ctx = LeavittContext(graph)

    print("word".ljust(40), "expectation")
    s_word = "be1 al1*"
    s_star = "al1 be1*"
    for k in range(1, args.max_power + 1):
        power = " ".join([s_word] * k)
        print(f"s^{k}".ljust(40), element_literal(expect(parse_element(ctx, power))))
        projection = " ".join([s_word] * k + [s_star] * k)
        print(f"s^{k} (s*)^{k}".ljust(40), element_literal(expect(parse_element(ctx, projection))))

    print()
    print("single-cell words against the closed form:")
    for cell_index, edge in ((0, "al1"), (1, "be1")):
        sub = cell_subgraph(graph, "v", cell_index)
        sub_ctx = LeavittContext(sub)
        mu = forward_path(sub, [edge])
        oracle = phi_ordinary(sub_ctx, mu, mu)
        direct = expect(parse_element(ctx, f"{edge} {edge}*"))
        status = "ok" if element_literal(direct) == element_literal(oracle) else "MISMATCH"
        print(
            f"  {edge} {edge}*: recursive={element_literal(direct)}  "
            f"closed-form n={n_mu(sub, mu)}  [{status}]"
        )


if __name__ == "__main__":
    main()
