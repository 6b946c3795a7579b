"""
Tower programs and chunk expansion
==================================

Walks through the assembly DSL: the three towers, their program libraries from
fully primitive (6 symbols) to fully chunked (2 symbols), and how chunk symbols
expand back to block placements on the 3x3 grid.
"""

from towertalk import expand_program, program_length, programs_for_tower, TOWER_IDS


def describe(program):
    steps = "  ".join(f"{s.thing} {s.anchor}" for s in program.steps)
    return f"[{steps}]  (length {program_length(program)})"


for tower_id in TOWER_IDS:
    print(f"tower {tower_id}")
    for program in programs_for_tower(tower_id):
        print(f"  {describe(program)}")
        expanded = expand_program(program)
        if expanded != program:
            print(f"    expands to {describe(expanded)}")
    print()

# Every program in a library builds the same structure:
for tower_id in TOWER_IDS:
    primitives = {expand_program(p) for p in programs_for_tower(tower_id)}
    assert len(primitives) == 1
print("all programs in each library expand to the same primitive placement sequence")
