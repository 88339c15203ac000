"""Regenerate the pinned sampling reports used by the acceptance suite.

Run from the repository root:  python tests/goldens/make_goldens.py
"""
import json
import os

from degseq.experiments import RunConfig, public, sample_report

HERE = os.path.dirname(__file__)
# (d, points per seed); sized so each d sees roughly 100+ inside points over three seeds
PLAN = {10: 800, 12: 600, 14: 600}
SEEDS = (1, 2, 3)


def golden_path(d, seed):
    return os.path.join(HERE, f"sample_d{d}_seed{seed}.json")


def render(report):
    return json.dumps(public(report), separators=(",", ":"), sort_keys=False) + "\n"


def main():
    for d, count in PLAN.items():
        for seed in SEEDS:
            text = render(sample_report(d, count, RunConfig(seed=seed)))
            with open(golden_path(d, seed), "w") as fh:
                fh.write(text)
            print(d, seed, json.loads(text)["counts"], flush=True)


if __name__ == "__main__":
    main()
