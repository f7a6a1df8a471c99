"""Shared pytest plumbing: the acceptance-gate summary.

Every gate the package must clear has one test in test_acceptance.py;
this hook prints a one-line verdict per gate after the run so the
overall state is readable without scanning individual test ids.
"""

ACCEPTANCE_FILE = "test_acceptance.py"

# (test function, what the gate checks) in reporting order.
CRITERIA = [
    ("test_similarity_search_matches_exhaustive_oracle",
     "similarity search matches the exhaustive scan-and-sort oracle"),
    ("test_count_model_hand_fixtures_and_factorization",
     "count-model weighting and factorization match hand-computed oracles"),
    ("test_centrality_rankers_match_dense_oracles",
     "centrality rankers match dense oracles and closed forms"),
    ("test_svm_satisfies_kkt_and_matches_qp_oracle",
     "trained SVMs satisfy KKT bounds and match the QP oracle"),
    ("test_expansion_protocol_invariants",
     "expansion protocol: growth by k, no repeats, shared inits, deterministic"),
    ("test_benchmark_method_ordering",
     "benchmark ordering: svm-rbf >= centroid >= eigencentrality and snr"),
    ("test_degenerate_and_perfect_gold_sanity",
     "degenerate gold saturates at k; perfect cluster sustains k to exhaustion"),
    ("test_reference_grid_renders_byte_for_byte",
     "stored reference grid renders byte-for-byte"),
    ("test_session_replay_and_restore",
     "recorded sessions replay identically and restore deep-equal"),
]


def _acceptance_outcomes(terminalreporter):
    outcomes = {}
    for bucket in ("passed", "failed", "error", "skipped"):
        for report in terminalreporter.stats.get(bucket, []):
            nodeid = getattr(report, "nodeid", "")
            if ACCEPTANCE_FILE not in nodeid:
                continue
            # Keep setup/teardown entries only when they carry a failure.
            if bucket == "passed" and getattr(report, "when", "call") != "call":
                continue
            name = nodeid.split("::")[-1]
            previous = outcomes.get(name)
            if previous in ("failed", "error"):
                continue
            outcomes[name] = bucket
    return outcomes


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    outcomes = _acceptance_outcomes(terminalreporter)
    if not outcomes:
        return
    terminalreporter.write_sep("=", "acceptance criteria")
    for test_name, label in CRITERIA:
        bucket = outcomes.get(test_name)
        if bucket == "passed":
            terminalreporter.write_line(f"PASS  {label}", green=True)
        elif bucket in ("failed", "error"):
            terminalreporter.write_line(f"FAIL  {label}", red=True)
        elif bucket == "skipped":
            terminalreporter.write_line(f"SKIP  {label}", yellow=True)
        else:
            terminalreporter.write_line(f"MISS  {label} (not run)", yellow=True)
