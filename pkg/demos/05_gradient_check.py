"""
Checking backpropagation against finite differences
===================================================

Every classifier computes its gradients by hand. Comparing them with central
differences on a small random model catches mistakes in the backward pass.
"""
from softskill.model import gradient_check
from softskill.represent import RepresentationMode, RepresentedInput

for kind in ("mean", "cnn", "lstm"):
    for mode in RepresentationMode:
        print(f"{kind:>5} {mode.value:>13}  max relative error {gradient_check(kind, mode):.2e}")

# A specific input can be checked too.
sample = RepresentedInput(("seek", "a", "<begin>", "dedicated", "person", "<end>", "who"), RepresentationMode.TAGGED, label=1)
print("lstm on sample:", f"{gradient_check('lstm', 'tagged', sample):.2e}")
