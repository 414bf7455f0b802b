"""Drive the HTTP gateway end to end against a temporary data directory."""

import tempfile
import threading
import time

import requests
import uvicorn

from cvp.server import create_app
from cvp.store import GraphStore

PORT = 8399
BASE = f"http://127.0.0.1:{PORT}"

tmp = tempfile.TemporaryDirectory(prefix="cvp-demo-")
server = uvicorn.Server(
    uvicorn.Config(create_app(GraphStore(tmp.name)), host="127.0.0.1", port=PORT, log_level="warning")
)
thread = threading.Thread(target=server.run, daemon=True)
thread.start()
while not server.started:
    time.sleep(0.05)

print("health:", requests.get(f"{BASE}/health").json())

created = requests.post(
    f"{BASE}/graphs",
    data='workflow "demo"\nnode C\nnode S\nnode Y\nedge C -> Y\n'.encode(),
    headers={"Content-Type": "text/x-cvp"},
).json()
gid = created["id"]
print("created:", created)

print("stored graph:", requests.get(f"{BASE}/graphs/{gid}").json())
print("blanket of Y:", requests.get(f"{BASE}/graphs/{gid}/nodes/Y/markov-blanket").json())

preview = requests.post(f"{BASE}/graphs/{gid}/intervene", json={"node": "Y"}).json()
print("do(Y) preview edges:", preview["edges"], "(store untouched)")

check = requests.post(
    f"{BASE}/graphs/{gid}/plan-check",
    json={"plan": {"steps": [
        {"module": "C", "reads": []},
        {"module": "S", "reads": []},
        {"module": "Y", "reads": ["C", "S"]},
    ]}},
).json()
print("plan-check:", check["ok"], [v["code"] for v in check["violations"]])

stale = requests.put(
    f"{BASE}/graphs/{gid}",
    json={"name": "demo", "nodes": [{"id": "C"}], "edges": []},
    headers={"If-Match": "99"},
)
print("stale write:", stale.status_code, stale.json()["code"])

experiment = requests.post(f"{BASE}/experiments/shift", json={"n_train": 500, "n_test": 500}).json()
for name, result in experiment["models"].items():
    print(f"experiment {name}: train {result['train_accuracy']:.3f} test {result['test_accuracy']:.3f}")

server.should_exit = True
thread.join(timeout=5)
tmp.cleanup()
print("done")
