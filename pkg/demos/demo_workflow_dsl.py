"""Parse the workflow text format, collect diagnostics, and round-trip JSON."""

from cvp import WorkflowParseError, parse_text, serialize_json, serialize_text

SOURCE = """\
workflow "demo"
# the world model for the shift experiment
node C label="Causal driver"
node S kind=data label="Spurious signal"
node Y
edge C -> Y
"""

graph = parse_text(SOURCE)
print("parsed:", graph)
print("\ncanonical text form:")
print(serialize_text(graph))
print("canonical JSON form:")
print(serialize_json(graph))

# The parser recovers per line and reports every problem at once.
BROKEN = """\
node A
node A
edge A -> A
edge A -> Missing
node 9bad
edge A ->
"""
try:
    parse_text(BROKEN)
except WorkflowParseError as exc:
    print("\ndiagnostics for the broken file:")
    for err in exc.errors:
        print(f"  line {err.span.line}, col {err.span.column}: {err.code}: {err.message}")

# Cycles are reported once the file is otherwise clean.
try:
    parse_text("node A\nnode B\nedge A -> B\nedge B -> A\n")
except WorkflowParseError as exc:
    print("\ncycle diagnostic:", exc.errors[0].message)
