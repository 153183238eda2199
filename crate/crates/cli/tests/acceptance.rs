//! Acceptance suite: one test per acceptance criterion, each printing a
//! PASS line on success. Answer expectations are exact symbolic values;
//! the fuzz campaign runs 1000 fixed-seed random programs.
//!
//! `criterion_05_concordance_both_undecided_as_originally_stated` is
//! expected to fail: see the test body for the analysis.

use std::collections::BTreeSet;
use std::path::PathBuf;
use std::process::{Command, Output};
use std::time::Instant;

use delp_core::argumentation::arguments_for;
use delp_core::comparison::{
    compare, more_specific, ActivationContext, CriterionConfig, PreferenceOutcome,
};
use delp_core::corpus;
use delp_core::dialectics::{
    answer, build_tree, defeaters_of, explore, mark_tree, warranted_literals, AnswerValue,
    DefeatKind, DialecticsConfig, Mark, Strategy,
};
use delp_core::model::{GroundProgram, Literal, Mode};
use delp_core::oracle::{
    differential_run, differential_run_mutated, invariant_violations, random_program,
    GeneratorParams, Mutation, OracleConfig,
};
use delp_core::parser::parse_query;

fn lit(s: &str) -> Literal {
    parse_query(s).unwrap()
}

fn cfg_for(g: &GroundProgram) -> DialecticsConfig {
    DialecticsConfig::default().for_program(g)
}

fn ans(name: &str, q: &str) -> AnswerValue {
    let g = corpus::ground(name);
    answer(&g, &cfg_for(&g), &lit(q)).unwrap().value
}

fn corpus_path(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../core/corpus")
        .join(format!("{name}.delp"))
        .display()
        .to_string()
}

fn delp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_delp")).args(args).output().expect("binary runs")
}

fn find_arg(g: &GroundProgram, conclusion: &str, pick: impl Fn(&delp_core::argumentation::ArgumentStructure) -> bool) -> delp_core::argumentation::ArgumentStructure {
    arguments_for(g, &lit(conclusion))
        .into_iter()
        .find(|a| pick(a))
        .unwrap_or_else(|| panic!("no matching argument for {conclusion}"))
}

#[test]
fn criterion_01_answer_tables() {
    use AnswerValue::*;
    let table = [
        ("birds", "flies(tina)", Yes),
        ("birds", "~flies(tina)", No),
        ("birds", "flies(tweety)", No),
        ("birds", "~flies(tweety)", Yes),
        ("nixon", "pacifist(nixon)", Undecided),
        ("nixon", "~pacifist(nixon)", Undecided),
        ("nixon", "has_a_gun(nixon)", Yes),
        ("indirect_conflict", "a", Undecided),
        ("indirect_conflict", "c", Undecided),
        ("stocks", "buy_stock(acme)", Yes),
        ("stocks", "buy_stock(alfa)", Unknown),
    ];
    for (program, query, expected) in table {
        assert_eq!(ans(program, query), expected, "{program}: {query}");
    }
    eprintln!("ACCEPTANCE C1 PASS: answer tables reproduce exactly");
}

#[test]
fn criterion_02_three_lines_end_to_end() {
    assert_eq!(ans("three_lines", "a"), AnswerValue::Undecided);
    assert_eq!(ans("three_lines", "~b"), AnswerValue::Yes);
    assert_eq!(ans("three_lines", "b"), AnswerValue::No);
    assert_eq!(ans("three_lines", "w"), AnswerValue::Unknown);

    let g = corpus::ground("three_lines");
    let cfg = cfg_for(&g);
    let root = arguments_for(&g, &lit("a")).remove(0);
    let tree = mark_tree(build_tree(&g, &cfg, &root).unwrap());

    // Exhaustive shape: root with B1, B2, B3; B2 with C1, C2; C1 with D1.
    assert_eq!(tree.root.children.len(), 3);
    let b1 = &tree.root.children[0];
    let b2 = &tree.root.children[1];
    let b3 = &tree.root.children[2];
    assert_eq!(b1.argument.to_string(), "<{~b -< c, d}, ~b>");
    assert_eq!(b2.argument.to_string(), "<{~b -< c, f; f -< g}, ~b>");
    assert_eq!(b3.argument.to_string(), "<{~b -< e}, ~b>");
    assert!(b1.children.is_empty());
    assert!(b3.children.is_empty());
    assert_eq!(b2.children.len(), 2);
    let c1 = &b2.children[0];
    let c2 = &b2.children[1];
    assert_eq!(c1.argument.to_string(), "<{~f -< g, h; h -< j}, ~f>");
    assert_eq!(c2.argument.to_string(), "<{~f -< i}, ~f>");
    assert_eq!(c1.children.len(), 1);
    assert_eq!(c1.children[0].argument.to_string(), "<{~h -< k}, ~h>");
    assert!(c2.children.is_empty());

    // Marks per the marking procedure: root D; leaves B1, B3, C2, D1 are U;
    // C1 and B2 are D.
    assert_eq!(tree.root.mark, Some(Mark::Defeated));
    assert_eq!(b1.mark, Some(Mark::Undefeated));
    assert_eq!(b2.mark, Some(Mark::Defeated));
    assert_eq!(b3.mark, Some(Mark::Undefeated));
    assert_eq!(c1.mark, Some(Mark::Defeated));
    assert_eq!(c2.mark, Some(Mark::Undefeated));
    assert_eq!(c1.children[0].mark, Some(Mark::Undefeated));

    // Pruned run: the root and its first child settle the verdict; the
    // same verdict.
    let pruned = explore(&g, &cfg, &lit("a"), Strategy::Pruned).unwrap();
    assert!(pruned.warrant.is_none());
    let ptree = &pruned.trees[0];
    assert!(ptree.stats.expanded <= 4, "expanded {}", ptree.stats.expanded);
    assert_eq!(ptree.stats.expanded, 2);
    assert!(!ptree.root.pruned.is_empty());
    let exhaustive = explore(&g, &cfg, &lit("a"), Strategy::Exhaustive).unwrap();
    assert_eq!(pruned.warrant.is_some(), exhaustive.warrant.is_some());
    eprintln!("ACCEPTANCE C2 PASS: three-lines tree, marks, and pruned run match");
}

#[test]
fn criterion_03_specificity_fixtures() {
    // Birds: more direct wins, more informed wins; reverses fail.
    let g = corpus::ground("birds");
    let ctx = ActivationContext::new(&g);
    let a1 = find_arg(&g, "~flies(tina)", |a| a.rules.len() == 1);
    let a2 = find_arg(&g, "flies(tina)", |a| a.rules[0].body.len() == 1);
    let a3 = find_arg(&g, "flies(tina)", |a| a.rules[0].body.len() == 2);
    assert!(more_specific(&ctx, &a1, &a2));
    assert!(!more_specific(&ctx, &a2, &a1));
    assert!(more_specific(&ctx, &a3, &a1));
    assert!(!more_specific(&ctx, &a1, &a3));

    // Reciprocal program: mutual proper defeat.
    let g44 = corpus::ground("reciprocal");
    let cfg44 = cfg_for(&g44);
    let arg_b = find_arg(&g44, "b", |a| a.rules.len() == 2);
    let arg_d = find_arg(&g44, "d", |a| a.rules.len() == 2);
    let on_b = defeaters_of(&g44, &cfg44, &arg_b).unwrap();
    let on_d = defeaters_of(&g44, &cfg44, &arg_d).unwrap();
    assert!(on_b.iter().any(|d| d.kind == DefeatKind::Proper && d.attack.attacker == arg_d));
    assert!(on_d.iter().any(|d| d.kind == DefeatKind::Proper && d.attack.attacker == arg_b));

    // Nixon pair: incomparable.
    let g22 = corpus::ground("nixon");
    let pac = find_arg(&g22, "pacifist(nixon)", |_| true);
    let npac = find_arg(&g22, "~pacifist(nixon)", |_| true);
    let spec = CriterionConfig::specificity();
    assert_eq!(compare(spec, &g22, &pac, &npac), PreferenceOutcome::Incomparable);
    assert_eq!(compare(spec, &g22, &npac, &pac), PreferenceOutcome::Incomparable);
    eprintln!("ACCEPTANCE C3 PASS: specificity fixtures hold");
}

#[test]
fn criterion_04_priority_criterion() {
    let g = corpus::ground("stocks_priorities");
    let cfg = DialecticsConfig::with_criterion(CriterionConfig::priorities());
    assert_eq!(answer(&g, &cfg, &lit("~buy_stock(acme)")).unwrap().value, AnswerValue::Yes);
    assert_ne!(answer(&g, &cfg, &lit("buy_stock(acme)")).unwrap().value, AnswerValue::Yes);
    eprintln!("ACCEPTANCE C4 PASS: priority criterion warrants ~buy_stock(acme) only");
}

#[test]
fn criterion_05_pathology_suite() {
    // Reciprocal defeaters terminate on every query.
    let g44 = corpus::ground("reciprocal");
    let cfg44 = cfg_for(&g44);
    for l in g44.language_literals() {
        answer(&g44, &cfg44, &l).unwrap();
    }

    // Subtree program: the tree has a single line; the repeat is rejected by
    // condition 3 and the second blocking defeater by condition 4.
    let out = delp(&["query", &corpus_path("subtree"), "a", "--trace"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("condition 3 (sub-argument reintroduction)"), "{text}");
    assert!(text.contains("condition 4 (blocking defeater after blocking defeater)"), "{text}");
    assert_eq!(ans("subtree", "a"), AnswerValue::Undecided);
    assert_eq!(ans("subtree", "~a"), AnswerValue::Undecided);

    // Hobbes: the dangerous queries are undecided, every argument's tree is
    // defeated, and the trace names the conditions that stop the chains.
    assert_eq!(ans("hobbes", "dangerous(hobbes)"), AnswerValue::Undecided);
    assert_eq!(ans("hobbes", "~dangerous(hobbes)"), AnswerValue::Undecided);
    let gh = corpus::ground("hobbes");
    let cfgh = cfg_for(&gh);
    let mut roots = arguments_for(&gh, &lit("dangerous(hobbes)"));
    roots.extend(arguments_for(&gh, &lit("~dangerous(hobbes)")));
    assert_eq!(roots.len(), 3);
    for root in &roots {
        let tree = mark_tree(build_tree(&gh, &cfgh, root).unwrap());
        assert_eq!(tree.root_mark(), Mark::Defeated);
    }
    let out = delp(&["query", &corpus_path("hobbes"), "~dangerous(hobbes)", "--trace"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("condition 4 (blocking defeater after blocking defeater)"), "{text}");

    // Concordance program: both concordance rejections are
    // observable in the traces.
    let out = delp(&["query", &corpus_path("concordance"), "p", "--trace"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("condition 2 (concordance)"), "{text}");
    eprintln!("ACCEPTANCE C5 PASS: pathology suite terminates and traces name conditions");
}

/// Expected to fail, kept deliberately: the concordance program was
/// originally written to leave both p and ~p UNDECIDED, with the two
/// head-on argumentation lines rejected by the concordance restriction.
/// Those rejections do happen (criterion 5 checks them), but the program
/// admits a second, easy-to-overlook argument for ~p, namely
/// <{f -< d}, ~p> through the strict rule ~p <- f, and it is warranted: the
/// line [<{f -< d}, ~p>, <B, p>, <C, ~p>] is acceptable, and <A, a> cannot
/// enter it because the interfering side {B, A} would stop being
/// concordant. So the definitions force ~p = YES and p = NO. The
/// brute-force oracle, written independently from the same definitions,
/// agrees; bending the engine to make this test green would break the
/// zero-disagreement gate of criterion 7 instead. This test pins the
/// original expectation so the divergence stays visible.
#[test]
fn criterion_05_concordance_both_undecided_as_originally_stated() {
    let p = ans("concordance", "p");
    let np = ans("concordance", "~p");
    assert_eq!(
        (p, np),
        (AnswerValue::Undecided, AnswerValue::Undecided),
        "the concordance program warrants ~p via <{{f -< d}}, ~p>; see the doc comment"
    );
    eprintln!("ACCEPTANCE C5(concordance answers) PASS");
}

#[test]
fn criterion_06_reinstatement() {
    let g = corpus::ground("reinstatement");
    let w = warranted_literals(&g, &cfg_for(&g)).unwrap();
    let expected: BTreeSet<Literal> = ["a", "~c", "b", "i", "j"].iter().map(|s| lit(s)).collect();
    assert_eq!(w, expected);
    eprintln!("ACCEPTANCE C6 PASS: reinstatement warranted set is exactly {{a, ~c, b, i, j}}");
}

#[test]
fn criterion_07_differential_campaign() {
    let started = Instant::now();

    // Full corpus: zero disagreements between pruned engine, exhaustive
    // engine, and oracle on answers, warranted sets, argument enumeration,
    // and specificity verdicts.
    for entry in corpus::all() {
        let g = corpus::ground(entry.name);
        let mut cfg = cfg_for(&g);
        if entry.name == "stocks_priorities" {
            cfg.criterion = CriterionConfig::priorities();
        }
        let outcome = differential_run(&g, &cfg, &OracleConfig::for_corpus());
        assert!(outcome.skipped.is_none(), "{}: {:?}", entry.name, outcome.skipped);
        assert_eq!(
            outcome.disagreements,
            0,
            "{}: {:#?}",
            entry.name,
            outcome.differences().collect::<Vec<_>>()
        );
    }

    // 1000 fixed-seed random programs.
    let params = GeneratorParams::default();
    let cfg = DialecticsConfig::default();
    let ocfg = OracleConfig::default();
    let mut compared = 0usize;
    for i in 0..1000 {
        let g = random_program(&params, i);
        let outcome = differential_run(&g, &cfg, &ocfg);
        if outcome.skipped.is_some() {
            continue;
        }
        compared += 1;
        assert_eq!(
            outcome.disagreements,
            0,
            "fuzz[{i}]: {:#?}\n{}",
            outcome.differences().collect::<Vec<_>>(),
            delp_core::parser::format_program(&g.as_program())
        );
    }
    assert!(compared >= 950, "only {compared} of 1000 programs were within oracle bounds");

    // Mutation sanity check: a build with the minimality check disabled
    // must produce a detected disagreement.
    let p = delp_core::parser::parse_program("a. b. h1 <- a. h1 -< b. p -< h1.", Mode::core())
        .unwrap();
    let g = delp_core::model::ground_program(&p).unwrap();
    let clean = differential_run(&g, &cfg, &ocfg);
    assert_eq!(clean.disagreements, 0);
    let broken = differential_run_mutated(&g, &cfg, &ocfg, Mutation { skip_minimality: true });
    assert!(broken.disagreements >= 1, "the harness must detect the broken build");

    let elapsed = started.elapsed();
    assert!(elapsed.as_secs() < 45, "campaign took {elapsed:?}");
    eprintln!(
        "ACCEPTANCE C7 PASS: zero disagreements on corpus + {compared} random programs in {elapsed:?}; mutation detected"
    );
}

#[test]
fn criterion_08_structural_invariants() {
    for entry in corpus::all() {
        let g = corpus::ground(entry.name);
        let mut cfg = cfg_for(&g);
        if entry.name == "stocks_priorities" {
            cfg.criterion = CriterionConfig::priorities();
        }
        let violations = invariant_violations(&g, &cfg);
        archive_on_violation(entry.name, &g, &violations);
        assert!(violations.is_empty(), "{}: {violations:#?}", entry.name);
    }
    let params = GeneratorParams::default();
    for i in 0..300 {
        let g = random_program(&params, i);
        let cfg = DialecticsConfig::default();
        let violations = invariant_violations(&g, &cfg);
        archive_on_violation(&format!("fuzz-{i}"), &g, &violations);
        assert!(
            violations.is_empty(),
            "fuzz[{i}]: {violations:#?}\n{}",
            delp_core::parser::format_program(&g.as_program())
        );
    }
    eprintln!("ACCEPTANCE C8 PASS: structural invariants hold on corpus + 300 fuzz programs");
}

/// A found exclusivity/coherence violation is preserved for inspection, not
/// discarded with the failing run.
fn archive_on_violation(label: &str, g: &GroundProgram, violations: &[String]) {
    if violations.is_empty() {
        return;
    }
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../target/acceptance-fixtures");
    let _ = std::fs::create_dir_all(&dir);
    let _ = std::fs::write(
        dir.join(format!("{label}.delp")),
        delp_core::parser::format_program(&g.as_program()),
    );
    let _ = std::fs::write(dir.join(format!("{label}.violations.txt")), violations.join("\n"));
}

#[test]
fn criterion_09_default_negation_mode() {
    // Railway: the assumption stands until attacked.
    assert_eq!(ans("railway", "~cross_railway_tracks"), AnswerValue::Yes);
    assert_eq!(ans("railway_attacked", "~cross_railway_tracks"), AnswerValue::Undecided);
    assert_eq!(ans("railway_attacked", "~train_is_coming"), AnswerValue::Yes);

    // The default-negation program kept in the language: a is warranted.
    assert_eq!(ans("default_negation", "a"), AnswerValue::Yes);

    // Coherence over a default-negation fuzz corpus: answer(~p) = YES
    // implies answer(p) != YES (checked inside invariant_violations).
    let params = GeneratorParams {
        mode: Mode::with_default_negation(),
        default_negation_prob: 0.35,
        seed: 0xd4,
        ..GeneratorParams::default()
    };
    for i in 0..300 {
        let g = random_program(&params, i);
        let cfg = DialecticsConfig::default();
        let violations = invariant_violations(&g, &cfg);
        archive_on_violation(&format!("dn-fuzz-{i}"), &g, &violations);
        assert!(
            violations.is_empty(),
            "dn-fuzz[{i}]: {violations:#?}\n{}",
            delp_core::parser::format_program(&g.as_program())
        );
    }
    eprintln!("ACCEPTANCE C9 PASS: railway answers, default-negation warrant, coherence over 300 dn programs");
}

#[test]
fn criterion_10_byte_identical_runs() {
    let dir = tempfile::tempdir().unwrap();
    let mut invocations: Vec<Vec<String>> = Vec::new();
    for entry in corpus::all() {
        let path = corpus_path(entry.name);
        let mode_args: Vec<String> = match (entry.mode.default_negation, entry.mode.presumptions)
        {
            (true, _) => vec!["--mode".into(), "default-negation".into()],
            (_, true) => vec!["--mode".into(), "presumptions".into()],
            _ => Vec::new(),
        };
        let mut warranted = vec!["warranted".into(), path.clone()];
        warranted.extend(mode_args.clone());
        if entry.name == "stocks_priorities" {
            warranted.extend(["--criterion".into(), "priorities".into()]);
        }
        invocations.push(warranted);

        let g = corpus::ground(entry.name);
        for l in g.language_literals().into_iter().take(3) {
            let mut q = vec![
                "query".into(),
                path.clone(),
                l.to_string(),
                "--trace".into(),
                "--tree".into(),
                "json".into(),
            ];
            q.extend(mode_args.clone());
            if entry.name == "stocks_priorities" {
                q.extend(["--criterion".into(), "priorities".into()]);
            }
            invocations.push(q);
        }
    }
    invocations.push(vec![
        "oracle".into(),
        corpus_path("indirect_conflict"),
        "--fuzz".into(),
        "10".into(),
        "--seed".into(),
        "7".into(),
    ]);

    for args in &invocations {
        let argv: Vec<&str> = args.iter().map(|s| s.as_str()).collect();
        let first = delp(&argv);
        let second = delp(&argv);
        assert_eq!(first.stdout, second.stdout, "stdout differs for {args:?}");
        assert_eq!(first.stderr, second.stderr, "stderr differs for {args:?}");
        assert_eq!(first.status.code(), second.status.code(), "{args:?}");
    }

    // Tree exports written to files are byte-identical across runs too.
    let out_a = dir.path().join("a.json");
    let out_b = dir.path().join("b.json");
    for (path, out_file) in [(corpus_path("three_lines"), &out_a), (corpus_path("three_lines"), &out_b)] {
        let out = delp(&["query", &path, "a", "--tree", "json", "--tree-out", out_file.to_str().unwrap()]);
        assert!(out.status.success());
    }
    assert_eq!(std::fs::read(&out_a).unwrap(), std::fs::read(&out_b).unwrap());
    eprintln!("ACCEPTANCE C10 PASS: identical invocations are byte-identical");
}

#[test]
fn acceptance_timing_every_corpus_query_under_one_second() {
    for entry in corpus::all() {
        let g = corpus::ground(entry.name);
        let mut cfg = cfg_for(&g);
        if entry.name == "stocks_priorities" {
            cfg.criterion = CriterionConfig::priorities();
        }
        for l in g.language_literals() {
            let started = Instant::now();
            answer(&g, &cfg, &l).unwrap();
            let elapsed = started.elapsed();
            assert!(
                elapsed.as_millis() < 1000,
                "{}: {l} took {elapsed:?}",
                entry.name
            );
        }
    }
    eprintln!("ACCEPTANCE TIMING PASS: every corpus query answers in under a second");
}
