"""Write the Wine and Breast Cancer Wisconsin tables as labeled CSVs.

Both datasets ship with scikit-learn, so no download is needed.

    python scripts/export_uci.py [out_dir]    # default: data/
"""

import sys
from pathlib import Path

from sklearn.datasets import load_breast_cancer, load_wine


def export(loader, path):
    bunch = loader(as_frame=True)
    frame = bunch.frame.rename(columns={"target": "label"})
    frame.columns = [c.replace(" ", "_") for c in frame.columns]
    frame.to_csv(path, index=False)
    print(f"{path}: {len(frame)} rows, {frame.shape[1] - 1} features")


def main():
    out = Path(sys.argv[1] if len(sys.argv) > 1 else "data")
    out.mkdir(parents=True, exist_ok=True)
    export(load_wine, out / "wine.csv")
    export(load_breast_cancer, out / "breast_cancer.csv")


if __name__ == "__main__":
    main()
