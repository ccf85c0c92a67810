"""Frozen expected values for the 5-point interval policy worked example.

Edge weights were derived by brute-force audience counting (up-set of the
child minus up-set of the parent, unit users); the tree and node weights
follow from the per-label weight minimizers with lowest-index tie-breaks.
"""

# parent alias -> child alias -> user-weighted audience size
EDGE_WEIGHTS = {
    ("[1,5]", "[1,4]"): 1,
    ("[1,5]", "[2,5]"): 1,
    ("[1,4]", "[1,3]"): 1,
    ("[1,4]", "[2,4]"): 2,
    ("[2,5]", "[2,4]"): 2,
    ("[2,5]", "[3,5]"): 1,
    ("[1,3]", "[1,2]"): 1,
    ("[1,3]", "[2,3]"): 3,
    ("[2,4]", "[2,3]"): 2,
    ("[2,4]", "[3,4]"): 2,
    ("[3,5]", "[3,4]"): 3,
    ("[3,5]", "[4,5]"): 1,
    ("[1,2]", "[1,1]"): 1,
    ("[1,2]", "[2,2]"): 4,
    ("[2,3]", "[2,2]"): 2,
    ("[2,3]", "[3,3]"): 3,
    ("[3,4]", "[3,3]"): 3,
    ("[3,4]", "[4,4]"): 2,
    ("[4,5]", "[4,4]"): 4,
    ("[4,5]", "[5,5]"): 1,
}

# child alias -> chosen parent alias in the minimal tree partition
TREE_PARENTS = {
    "[1,4]": "[1,5]",
    "[2,5]": "[1,5]",
    "[1,3]": "[1,4]",
    "[2,4]": "[1,4]",
    "[3,5]": "[2,5]",
    "[1,2]": "[1,3]",
    "[2,3]": "[2,4]",
    "[3,4]": "[2,4]",
    "[4,5]": "[3,5]",
    "[1,1]": "[1,2]",
    "[2,2]": "[2,3]",
    "[3,3]": "[2,3]",
    "[4,4]": "[3,4]",
    "[5,5]": "[4,5]",
    "[1,5]": None,
}

# label alias -> per-node weight under the tree above; sums to 22
NODE_WEIGHTS = {
    "[1,1]": 1,
    "[2,2]": 2,
    "[3,3]": 3,
    "[4,4]": 2,
    "[5,5]": 1,
    "[1,2]": 1,
    "[2,3]": 2,
    "[3,4]": 2,
    "[4,5]": 1,
    "[1,3]": 1,
    "[2,4]": 2,
    "[3,5]": 1,
    "[1,4]": 1,
    "[2,5]": 1,
    "[1,5]": 1,
}
