"""Running suites from Python and reading the report back.

Equivalent to ``ellhyp core-qseries series --seed 3``.

Run: python demos/05_reports.py
"""
import collections

from ellhyp import harness

config = harness.SuiteConfig(suites=["core-qseries", "series"], seed=3)
rows = harness.run_suites(config)
text = harness.render_json(rows, config)
meta, back = harness.parse_json(text)
print("meta:", meta)
print("verdicts:", collections.Counter(rep.verdict for _, _, rep in back))
worst = max(back, key=lambda row: row[2].rel_residual)
print("worst check:", worst[2])
print("exit status would be", harness.exit_status(rows))
print(harness.render_csv(rows[:3], config))
