//! Problem-document ingestion: round-trips, validation diagnostics, and
//! solvability of every bundled instance.

use vendinfo::SolverConfig;
use vendinfo_cli::doc::{bundled, ParsedProblem, ProblemDocument, BUNDLED};
use vendinfo_cli::solve::solve_document;

#[test]
fn bundled_documents_round_trip() {
    for (name, text) in BUNDLED {
        let doc = ProblemDocument::from_json(text).unwrap_or_else(|e| panic!("{name}: {e}"));
        assert_eq!(doc.name, *name);
        let again = ProblemDocument::from_json(&doc.to_json()).unwrap();
        assert_eq!(doc, again, "{name} changed across serialize/parse");
    }
}

#[test]
fn bundled_documents_build_cleanly() {
    let cfg = SolverConfig::default();
    for (name, text) in BUNDLED {
        let doc = ProblemDocument::from_json(text).unwrap();
        let outcome = doc.build(&cfg).unwrap_or_else(|e| panic!("{name}: {e}"));
        assert!(outcome.warnings.is_empty(), "{name}: {:?}", outcome.warnings);
        assert!(!outcome.d_grid.is_empty() && !outcome.c_grid.is_empty());
        match (&outcome.problem, *name) {
            (ParsedProblem::Gaussian { .. }, "gaussian_unit") => {}
            (ParsedProblem::Gaussian { .. }, other) => panic!("{other} parsed as gaussian"),
            (ParsedProblem::Discrete(_), "gaussian_unit") => panic!("gaussian_unit parsed as discrete"),
            (ParsedProblem::Discrete(_), _) => {}
        }
    }
}

#[test]
fn bundled_lookup_matches_table() {
    for (name, text) in BUNDLED {
        assert_eq!(bundled(name), Some(*text));
    }
    assert_eq!(bundled("no_such_instance"), None);
}

#[test]
fn malformed_row_is_named_in_the_error() {
    let text = r#"{
        "name": "bad",
        "mode": "decoder",
        "p_x": [0.5, 0.5],
        "p_y_given_xa": [
            [[1.0, 0.0], [0.6, 0.3]],
            [[0.0, 1.0], [0.5, 0.5]]
        ],
        "rho": [[0.0, 1.0], [1.0, 0.0]],
        "lambda": [0.0, 1.0]
    }"#;
    let doc = ProblemDocument::from_json(text).unwrap();
    let err = doc.build(&SolverConfig::default()).unwrap_err();
    assert!(err.contains("x=0,a=1"), "error does not name the row: {err}");
}

#[test]
fn slightly_off_mass_is_renormalized_with_warning() {
    let text = r#"{
        "name": "off",
        "mode": "decoder",
        "p_x": [0.5, 0.50000005],
        "p_y_given_xa": [
            [[1.0, 0.0]],
            [[0.0, 1.0]]
        ],
        "rho": [[0.0, 1.0], [1.0, 0.0]],
        "lambda": [0.0]
    }"#;
    let doc = ProblemDocument::from_json(text).unwrap();
    let outcome = doc.build(&SolverConfig::default()).unwrap();
    assert_eq!(outcome.warnings.len(), 1, "{:?}", outcome.warnings);
    assert!(outcome.warnings[0].contains("p_x"));
}

#[test]
fn unknown_fields_are_rejected() {
    let err = ProblemDocument::from_json(r#"{"name": "x", "mode": "decoder", "bogus": 1}"#)
        .unwrap_err();
    assert!(err.contains("bogus"), "{err}");
}

#[test]
fn solver_overrides_apply() {
    let text = r#"{
        "name": "ov",
        "mode": "decoder",
        "p_x": [0.5, 0.5],
        "p_y_given_xa": [
            [[1.0, 0.0]],
            [[0.0, 1.0]]
        ],
        "rho": [[0.0, 1.0], [1.0, 0.0]],
        "lambda": [0.0],
        "solver": {"seed": 99, "restarts": 3}
    }"#;
    let doc = ProblemDocument::from_json(text).unwrap();
    let outcome = doc.build(&SolverConfig::default()).unwrap();
    assert_eq!(outcome.solver.seed, 99);
    assert_eq!(outcome.solver.restarts, 3);
}

#[test]
fn bundled_documents_solve_without_unexpected_infeasibility() {
    let cfg = SolverConfig {
        restarts: 4,
        max_iters: 200,
        lambda_points: 20,
        ..SolverConfig::default()
    };
    for (name, text) in BUNDLED {
        let doc = ProblemDocument::from_json(text).unwrap();
        let emission = solve_document(&doc, &cfg).unwrap_or_else(|e| panic!("{name}: {e}"));
        assert!(
            !emission.has_infeasible(),
            "{name} produced infeasible rows"
        );
        let csv = emission.render(false);
        assert!(csv.contains(name), "{name} missing from its own emission");
    }
}
