"""Reports from the command line: the same flags give the same bytes.

Runs the CLI in-process, writes a JSON and a CSV report into a scratch
directory, and checks that a rerun with more workers changes nothing.
"""

import io
import json
import tempfile
from pathlib import Path

from orthoconv import cli


def orthoconv(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = cli.run(list(argv), out, err)
    return code, out.getvalue() or err.getvalue()


print(orthoconv("eval", "--family", "meixner-pollaczek", "--lambda", "1", "--phi", "1.5707963267948966", "--n", "1", "--x", "0.3")[1], end="")
print(orthoconv("coeff", "--kind", "racah-uq-su11", "--k1", "0.7", "--k2", "1.3", "--k3", "0.9",
                "--j12", "2", "--j23", "1", "--j", "1", "--q", "0.6")[1], end="")

with tempfile.TemporaryDirectory() as tmp:
    base = ("verify", "--identity", "T4_10", "--samples", "40", "--seed", "42")
    orthoconv(*base, "--report", f"{tmp}/a.json")
    orthoconv(*base, "--workers", "4", "--report", f"{tmp}/b.json")
    a, b = Path(tmp, "a.json").read_bytes(), Path(tmp, "b.json").read_bytes()
    doc = json.loads(a)
    print(f"T4_10: {doc['count']} samples, max residual {doc['max_residual']:.3e}, pass={doc['pass']}")
    print("byte-identical across worker counts:", a == b)

    code, _ = orthoconv(*base, "--format", "csv", "--report", f"{tmp}/a.csv")
    rows = Path(tmp, "a.csv").read_text().splitlines()
    print(f"csv: exit {code}, {len(rows) - 1} sample rows, columns {rows[0][:60]}...")

code, msg = orthoconv("verify", "--identity", "T9_9")
print(f"unknown identity -> exit {code}: {msg.strip()[:70]}")
