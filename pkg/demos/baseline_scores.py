"""Score the published baseline times and compare with the published scores.

Run with ``python3 demos/baseline_scores.py``. The bundled times are rounded
(integer seconds, integer steps), so a few scores differ from the published
ones in the sixth decimal.
"""
from ttr_arbiter import datasets
from ttr_arbiter.scoring import score_matrix


def compare(title, matrix, published):
    print(title)
    print(f"  {'baseline':<20}{'computed':>10}{'published':>11}{'diff':>11}")
    for sid, score in sorted(score_matrix(matrix).items(), key=lambda kv: -kv[1]):
        want = published[sid]
        print(f"  {sid:<20}{score:>10.6f}{want:>11.6f}{score - want:>+11.1e}")
    print()


if __name__ == "__main__":
    compare("Runtime scores", datasets.baseline_runtimes(), datasets.published_runtime_scores())
    compare("Step scores", datasets.baseline_steps(), datasets.published_steps_scores())
