# The general problem: four families of pairs that one unitary U must
# satisfy at once -- similarity for S1, congruence for S2, and the same
# relations through conj(U) for S3 and S4.  Placement parities inside one
# block gadget encode which relation each pair must satisfy.

from unieq import (
    build_general_gadget,
    decision_letters,
    make_yes_instance,
    perturb_to_no,
    plan_layout,
    solve_general,
    verify_witness,
)

# Where each family may sit: row/column parity with a gap of at least two
layout = plan_layout(1, 1, 1, 1, n=2)
print(f"layout for one pair per family: k = {layout.k} blocks")
for p in layout.placements:
    parity = ("even", "odd")
    print(
        f"  family S{p.set_id} -> block ({p.i},{p.j})"
        f"  [{parity[p.i % 2]} row, {parity[p.j % 2]} column]"
    )

# A YES instance generated from a retained witness
gen = make_yes_instance(2, 1, 1, 1, 1, seed=42)
print("\nwitness verifies:", verify_witness(gen.inst, gen.witness))

ga, gb = build_general_gadget(gen.inst)
print("gadget size:", ga.M.shape)

verdict = solve_general(gen.inst)
print("decision:", verdict.result, "via", verdict.route)

# Perturbing one matrix breaks the equivalence, with a certificate that can
# be re-verified from scratch against the rebuilt decision letters.
bad = perturb_to_no(gen, epsilon=0.1, seed=43)
verdict = solve_general(bad.inst)
print("\nperturbed decision:", verdict.result)
cert = verdict.certificate
print("certificate kind:", cert.to_json()["kind"], "at word", cert.word)
scale, left, right = decision_letters(bad.inst)
print("certificate recheck:", cert.recheck(left, right, 1e-8))
