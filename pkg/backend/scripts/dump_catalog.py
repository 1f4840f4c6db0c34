# backend/scripts/dump_catalog.py
"""
Write catalog algebras as algebra JSON files under data/catalog/, one per
name, for use with `skt check` and `skt fingerprint`.
"""

from app.config import DATA_DIR
from app.core.catalog import expand_target
from app.io import algebra_to_doc, dumps

CATALOG_DIR = DATA_DIR / "catalog"

# file stem -> target
DUMPS = {
    "h3": "h3",
    "aff": "aff",
    "n37D": "n37D",
    "n6_1": "n6_1",
    "n6_2": "n6_2",
    "r3p_0": "r3p(λ=0)",
    "g5_14_0": "g5_14(α=0)",
    "2h3": "2h3",
    "3aff": "3aff",
    "aff_h3_R": "aff + h3 + R",
}


def main() -> None:
    CATALOG_DIR.mkdir(parents=True, exist_ok=True)
    for stem, target in DUMPS.items():
        L = expand_target(target)
        path = CATALOG_DIR / f"{stem}.json"
        path.write_text(dumps(algebra_to_doc(L)) + "\n", encoding="utf-8")
        print(f"{target:>16} -> {path}")
    print(f"Catalog dump complete ({len(DUMPS)} files).")


if __name__ == "__main__":
    main()
