"""JSON round trip for countermodel certificates and the command line.

A certificate is an ordinary model document plus the failing world, so a
third party can check it with the published schema and the ``check`` and
``validate`` subcommands.

Run: python demos/05_certificates_json.py
"""

import json
import subprocess
import sys
import tempfile
from pathlib import Path

from finmok import KripkeFrame, Modes, parse_formula
from finmok.decide import refute
from finmok.semantics import frame_to_json

chain = KripkeFrame(("w", "v"), 1, {1: {("w", "v")}})
f = "x != y -> [1](x != y)"
verdict = refute(chain, parse_formula(f), Modes("expanding", "congruence"), 2)
cert = verdict.to_json()["certificate"]
print(json.dumps(cert))

with tempfile.TemporaryDirectory() as tmp:
    model_path = Path(tmp) / "cert.json"
    model_path.write_text(json.dumps(cert))
    frame_path = Path(tmp) / "chain.json"
    frame_path.write_text(json.dumps(frame_to_json(chain)))
    for argv in (["validate", "--model", str(model_path)],
                 ["check", "--model", str(model_path), "--formula", f],
                 ["decide", "--frame", str(frame_path), "--formula", f, "--equality", "identity"]):
        out = subprocess.run([sys.executable, "-m", "finmok.cli", *argv],
                             capture_output=True, text=True)
        print("$ finmok", " ".join(argv[:1]), "->", "exit", out.returncode)
        print(" ", json.dumps(json.loads(out.stdout))[:160])
