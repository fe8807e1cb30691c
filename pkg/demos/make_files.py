"""Write the demo input files next to this script."""

from pathlib import Path

from forestslp.samples import ac_pair_texts, spine_doubling_text, topdag_sample_text, wide_labels_text

HERE = Path(__file__).parent


def main():
    f1, f2 = ac_pair_texts(30)
    (HERE / "pair1.fslp").write_text(f1)
    (HERE / "pair2.fslp").write_text(f2)
    (HERE / "theory.txt").write_text("assoc: e\ncomm: d\n")
    (HERE / "assoc_only.txt").write_text("assoc: e\n")
    (HERE / "doubling.fslp").write_text(spine_doubling_text(20))
    (HERE / "spine.topdag").write_text(topdag_sample_text(3))
    (HERE / "wide.fslp").write_text(wide_labels_text(8))
    (HERE / "comm_a.txt").write_text("comm: a\n")
    (HERE / "small.tree").write_text("r(a(b c) a(b c) a(b c) a(c b))\n")


if __name__ == "__main__":
    main()
