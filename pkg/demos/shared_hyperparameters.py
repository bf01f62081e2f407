"""How much does one shared hyperparameter point cost on each workload?

Builds a validation table from the per-workload and shared optima of four
optimizer families and reports the worst-case relative degradation.
Run with ``python3 demos/shared_hyperparameters.py``.
"""
from ttr_arbiter import datasets
from ttr_arbiter.analysis import ValidationTable, phi_metric
from ttr_arbiter.core import MetricDirection


def table(pairs, directions, workloads):
    rows = [[shared for _, shared, _ in pairs]]
    for j in range(len(pairs)):
        row = []
        for k, ((best, shared, _), d) in enumerate(zip(pairs, directions)):
            worse = 2.0 * max(best, shared) if d is MetricDirection.MINIMIZE else 0.5 * min(best, shared)
            row.append(best if k == j else worse)
        rows.append(row)
    points = ["shared"] + [f"best_for_{w}" for w in workloads]
    return ValidationTable(tuple(workloads), tuple(directions), tuple(points), rows)


if __name__ == "__main__":
    workloads, directions = datasets.workload_order(), datasets.workload_directions()
    published = datasets.published_phi()
    for family, pairs in datasets.phi_pairs().items():
        res = phi_metric(table(pairs, directions, workloads))
        worst = workloads[int(res.per_workload.argmax())]
        print(f"{family:<10} Phi = {res.Phi:.6f} (published {published[family]:.6f}), worst workload {worst}")
