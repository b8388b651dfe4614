"""Recompute the published PRE grid and show it next to the printed values.

Run:  python3 demos/05_efficiency_table.py
"""

from hhexp import efficiency

report = efficiency.replication_report()
print(report["text_table"])
print("bracketed numbers are the published values")
for name, ok in report["verdicts"].items():
    print(f"  {name}: {ok}")
print(f"PRE computed two ways agrees to {report['consistency']['max_rel_pre_gap']:.1e}")
