#!/usr/bin/env python3
"""Regenerates configs/presets/*.json for the published simulation designs."""

import json
import pathlib

ROOT = pathlib.Path(__file__).resolve().parent.parent / "configs" / "presets"
ESTIMATORS = ["GQDA", "W", "MVE", "MCD", "M", "S", "SD"]
FAMILIES = {"normal": {"family": "normal"}, "t3": {"family": "t", "df": 3}, "cauchy": {"family": "cauchy"}}
LEVELS = [0.05, 0.10, 0.15, 0.20]
TARGETS = {"train": "train", "train-and-test": "train-and-test"}


def preset(name, design, family, contamination=None):
    doc = {"name": name, "design": design, **FAMILIES[family], "n_train": 1000, "n_test": 4000}
    if contamination:
        doc["contamination"] = contamination
    doc["estimators"] = ESTIMATORS
    doc["replications"] = 500
    return doc


def main():
    ROOT.mkdir(parents=True, exist_ok=True)
    for old in ROOT.glob("*.json"):
        old.unlink()
    count = 0
    for design in ("two-class", "four-class"):
        for family in FAMILIES:
            docs = [preset(f"{design}-{family}-pure", design, family)]
            for kind in ("mild", "hard"):
                for level in LEVELS:
                    for target in TARGETS:
                        name = f"{design}-{family}-{kind}-{round(level * 100):02d}-{target}"
                        docs.append(preset(name, design, family,
                                           {"fraction": level, "kind": kind, "target": TARGETS[target]}))
            for doc in docs:
                (ROOT / f"{doc['name']}.json").write_text(json.dumps(doc, indent=2) + "\n")
                count += 1
    print(f"wrote {count} presets to {ROOT}")


if __name__ == "__main__":
    main()
