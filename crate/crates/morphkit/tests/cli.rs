use std::collections::BTreeSet;
use std::path::Path;

use morphkit::cli;
use morphkit_core::analyze::GuesserModel;
use morphkit_core::data;

struct Out {
    code: i32,
    stdout: String,
    stderr: String,
}

fn run(args: &[&str], stdin: &str) -> Out {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let mut input = stdin.as_bytes();
    let code = cli::run(
        std::iter::once("morphkit").chain(args.iter().copied()),
        &mut input,
        &mut out,
        &mut err,
    );
    Out {
        code,
        stdout: String::from_utf8(out).unwrap(),
        stderr: String::from_utf8(err).unwrap(),
    }
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn train(dir: &Path, mode: &str) -> String {
    let corpus = dir.join("train.tsv");
    std::fs::write(&corpus, data::TRAINING_CORPUS).unwrap();
    let model = dir.join(format!("{mode}.model"));
    let o = run(
        &[
            "train",
            "--corpus",
            path(&corpus),
            "--tagset",
            mode,
            "--output",
            path(&model),
        ],
        "",
    );
    assert_eq!(o.code, 0, "{}", o.stderr);
    path(&model).to_string()
}

#[test]
fn analyze_winde_prints_twelve_readings() {
    let o = run(&["analyze", "--word", "Winde"], "");
    assert_eq!(o.code, 0);
    let lines: Vec<&str> = o.stdout.lines().collect();
    assert_eq!(lines.len(), 12);
    assert!(lines
        .iter()
        .all(|l| l.starts_with("Winde\t") && l.split('\t').count() == 4));
    assert!(lines.contains(&"Winde\tWind\tSUB DAT SIN MAS\tWind"));
}

#[test]
fn analyze_reads_tokens_from_stdin() {
    let o = run(&["analyze"], "Wind Schweinebauch");
    assert_eq!(o.code, 0);
    let blocks: Vec<&str> = o.stdout.split("\n\n").collect();
    assert_eq!(blocks.len(), 2);
    assert!(blocks[1].contains("Schweinebauch\tSchweinebauch\tSUB NOM SIN MAS\tSchwein(e)+Bauch"));
}

#[test]
fn fullform_lookup_agrees_with_paradigms() {
    let dir = tempfile::tempdir().unwrap();
    let export = dir.path().join("export.txt");
    let o = run(&["export", "--output", path(&export)], "");
    assert_eq!(o.code, 0);
    for word in ["Häuser", "Winde", "Weise", "ging"] {
        let direct = run(&["analyze", "--word", word], "");
        let table = run(&["analyze", "--fullform", path(&export), "--word", word], "");
        let set = |s: &str| s.lines().map(String::from).collect::<BTreeSet<_>>();
        assert_eq!(set(&direct.stdout), set(&table.stdout), "{word}");
        assert!(!direct.stdout.is_empty());
    }
}

#[test]
fn generate_lists_forms() {
    let o = run(&["generate", "--lemma", "Haus", "--pos", "SUB"], "");
    assert_eq!(o.code, 0);
    assert!(o.stdout.lines().any(|l| l == "Häuser\tSUB NOM PLU NEU"));
    let o = run(&["generate", "--lemma", "Hauss"], "");
    assert_eq!(o.code, 2);
    let o = run(&["generate", "--lemma", "Haus", "--pos", "XYZ"], "");
    assert_eq!(o.code, 1);
}

#[test]
fn exit_codes() {
    assert_eq!(run(&[], "").code, 1);
    assert_eq!(run(&["frobnicate"], "").code, 1);
    assert_eq!(run(&["train", "--tagset", "small"], "").code, 1);
    assert_eq!(run(&["train", "--corpus", "x", "--tagset", "medium"], "").code, 1);
    assert_eq!(run(&["--help"], "").code, 0);
    assert_eq!(run(&["analyze", "--lexicon", "/nonexistent/lexicon"], "").code, 2);
    let o = run(&["lemmatize"], "Wind\tSUB\n");
    assert_eq!(o.code, 1);
    assert!(o.stderr.contains("--tagset"));
}

#[test]
fn tagging_empty_input_is_a_data_error() {
    let dir = tempfile::tempdir().unwrap();
    let model = train(dir.path(), "small");
    let o = run(&["tag", "--model", &model], "");
    assert_eq!(o.code, 2);
    assert!(o.stderr.contains("empty corpus"));
}

#[test]
fn training_on_an_empty_corpus_fails() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = dir.path().join("empty.tsv");
    std::fs::write(&corpus, "\n").unwrap();
    let o = run(&["train", "--corpus", path(&corpus), "--tagset", "small"], "");
    assert_eq!(o.code, 2);
    assert!(o.stderr.contains("empty corpus"));
}

#[test]
fn invalid_utf8_is_a_data_error() {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let mut input: &[u8] = &[0x57, 0xff, 0x0a];
    assert_eq!(cli::run(["morphkit", "analyze"], &mut input, &mut out, &mut err), 2);
}

#[test]
fn tags_the_example_sentence() {
    let dir = tempfile::tempdir().unwrap();
    let model = train(dir.path(), "small");
    let o = run(
        &["tag", "--model", &model, "--tagset", "small"],
        "Ich meine meine Frau.",
    );
    assert_eq!(o.code, 0, "{}", o.stderr);
    assert_eq!(
        o.stdout,
        "Ich\tPRO PER\nmeine\tVER\nmeine\tPOS ATT\nFrau\tSUB\n.\tSZE\n"
    );
    // the model is small, so asking for large is refused
    let o = run(&["tag", "--model", &model, "--tagset", "large"], "Ich meine.");
    assert_eq!(o.code, 2);
}

#[test]
fn piped_lemmatization_equals_the_combined_command() {
    let dir = tempfile::tempdir().unwrap();
    let text = "Ich meine meine Frau. Der Wind weht im Garten. Ich danke dem Meister.";
    for mode in ["small", "large"] {
        let model = train(dir.path(), mode);
        let tagged = run(&["tag", "--model", &model], text);
        let piped = run(&["lemmatize", "--tagset", mode], &tagged.stdout);
        let combined = run(&["lemmatize", "--with-tagger", &model], text);
        assert_eq!(piped.code, 0, "{}", piped.stderr);
        assert_eq!(piped.stdout, combined.stdout);
        if mode == "small" {
            assert!(combined.stdout.contains("meine\tVER\tmeinen\tRESOLVED\n"));
        }
    }
}

#[test]
fn guesser_training_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let export = dir.path().join("export.txt");
    run(&["export", "--output", path(&export)], "");
    let from_export = run(&["train-guesser", "--fullform", path(&export)], "");
    let from_lexicon = run(&["train-guesser"], "");
    assert_eq!(from_export.code, 0);
    assert_eq!(from_export.stdout, from_lexicon.stdout);
    let g = GuesserModel::parse(&from_export.stdout).unwrap();
    assert!(g.is_trained());
}

#[test]
fn eval_reports_statistics() {
    let dir = tempfile::tempdir().unwrap();
    let model = train(dir.path(), "small");
    let gold = dir.path().join("gold.tsv");
    std::fs::write(&gold, data::GOLD_CORPUS).unwrap();
    let o = run(&["eval", "--model", &model, "--gold", path(&gold)], "");
    assert_eq!(o.code, 0, "{}", o.stderr);
    for key in [
        "tagging accuracy",
        "ambiguity rate",
        "coverage",
        "lemma accuracy",
        "ambiguous-lemma accuracy",
    ] {
        assert!(o.stdout.lines().any(|l| l.starts_with(key)), "{key}");
    }
    let o = run(
        &["eval", "--model", &model, "--gold", path(&gold), "--format", "json"],
        "",
    );
    let v: serde_json::Value = serde_json::from_str(&o.stdout).unwrap();
    assert_eq!(v["mode"], "small");
    assert!(v["tagging_accuracy"].as_f64().unwrap() > 0.5);
}

#[test]
fn lexicon_add_from_answers() {
    let dir = tempfile::tempdir().unwrap();
    let lex = dir.path().join("lex.txt");
    std::fs::write(&lex, data::FIXTURE_LEXICON).unwrap();
    let before = run(&["analyze", "--lexicon", path(&lex), "--word", "Tisches"], "");
    assert!(before.stdout.lines().all(|l| !l.contains("SUB GEN SIN MAS")));

    let o = run(
        &[
            "lexicon-add",
            "--lexicon",
            path(&lex),
            "--lemma",
            "Tisch",
            "--answers",
            "noun,der",
        ],
        "",
    );
    assert_eq!(o.code, 1);
    assert!(o.stderr.contains("plural"));

    let o = run(
        &[
            "lexicon-add",
            "--lexicon",
            path(&lex),
            "--lemma",
            "Tisch",
            "--answers",
            "noun,der,e,no",
        ],
        "",
    );
    assert_eq!(o.code, 0, "{}", o.stderr);
    let after = run(&["analyze", "--lexicon", path(&lex), "--word", "Tisches"], "");
    assert!(after
        .stdout
        .lines()
        .any(|l| l == "Tisches\tTisch\tSUB GEN SIN MAS\tTisch"));

    let dup = run(
        &[
            "lexicon-add",
            "--lexicon",
            path(&lex),
            "--lemma",
            "Tisch",
            "--pos",
            "SUB",
            "--paradigm",
            "noun-mas-e",
        ],
        "",
    );
    assert_eq!(dup.code, 2);
    assert!(dup.stderr.contains("duplicate"));
}
