use alloc::collections::BTreeSet;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use alloc::{format, vec};

use proptest::prelude::*;

use super::*;
use crate::inflect::base_stem;
use crate::lexicon::{fullform_lines, FullFormTable, StemEntry};
use crate::tagset::{parse_tag, TagsetMapping};

fn fixture() -> (Lexicon, GuesserModel) {
    let lex = Lexicon::fixture();
    let g = GuesserModel::from_lexicon(&lex, DEFAULT_SUFFIX_LEN, &TagsetMapping::default_small()).unwrap();
    (lex, g)
}

fn readings(list: &[Analysis]) -> BTreeSet<(String, String)> {
    list.iter().map(|a| (a.tag.render(), a.lemma.clone())).collect()
}

#[test]
fn winde_has_exactly_the_twelve_readings() {
    let (lex, g) = fixture();
    let got = readings(&analyze("Winde", &lex, &g).unwrap());
    let expected: BTreeSet<(String, String)> = [
        ("SUB NOM SIN FEM", "Winde"),
        ("SUB GEN SIN FEM", "Winde"),
        ("SUB DAT SIN FEM", "Winde"),
        ("SUB AKK SIN FEM", "Winde"),
        ("SUB DAT SIN MAS", "Wind"),
        ("SUB NOM PLU MAS", "Wind"),
        ("SUB GEN PLU MAS", "Wind"),
        ("SUB AKK PLU MAS", "Wind"),
        ("VER SIN 1PE PRÄ", "winden"),
        ("VER SIN 1PE KJ1", "winden"),
        ("VER SIN 3PE KJ1", "winden"),
        ("VER SIN IMP", "winden"),
    ]
    .iter()
    .map(|(t, l)| (parse_tag(t).unwrap().render(), l.to_string()))
    .collect();
    assert_eq!(got, expected);
}

#[test]
fn wind_matches_the_export_lines() {
    // oracle: filter the full-form export by form
    let (lex, g) = fixture();
    let expected: BTreeSet<(String, String)> = fullform_lines(&lex)
        .unwrap()
        .into_iter()
        .filter(|l| l.form == "Wind")
        .map(|l| (l.tag.render(), l.lemma))
        .collect();
    assert_eq!(readings(&analyze("Wind", &lex, &g).unwrap()), expected);
    assert!(expected.iter().all(|(t, l)| l == "Wind" && t.contains("SIN MAS")));
}

#[test]
fn unknown_form_is_guessed() {
    let (lex, g) = fixture();
    let out = analyze("Xylopharen", &lex, &g).unwrap();
    assert!(!out.is_empty());
    assert!(out.len() <= DEFAULT_TOP_K);
    for a in &out {
        assert_eq!(a.provenance, Provenance::Guesser);
        assert_eq!(a.lemma, "Xylopharen");
    }
}

#[test]
fn empty_form_is_an_error() {
    let (lex, g) = fixture();
    assert_eq!(analyze("", &lex, &g), Err(AnalyzeError::EmptyForm));
    assert_eq!(Analyzer::new(&lex).candidate_roots(""), Err(AnalyzeError::EmptyForm));
}

#[test]
fn candidate_root_examples() {
    let (lex, _) = fixture();
    let an = Analyzer::new(&lex);
    assert!(an.candidate_roots("Häuser").unwrap().contains(&"Haus".to_string()));
    assert!(an.candidate_roots("Wind").unwrap().contains(&"Wind".to_string()));
    assert!(an.candidate_roots("Fässer").unwrap().contains(&"Faß".to_string()));
    let roots = an.candidate_roots("Winde").unwrap();
    let unique: BTreeSet<&String> = roots.iter().collect();
    assert_eq!(unique.len(), roots.len());
}

#[test]
fn candidate_roots_contain_every_generating_key() {
    // superset guarantee: some index key of the entry is among the roots
    let (lex, _) = fixture();
    let an = Analyzer::new(&lex);
    for e in lex.entries() {
        let p = lex.paradigm_of(e).unwrap();
        let keys = crate::lexicon::index_keys(e, p).unwrap();
        for (form, _) in generate(e, p).unwrap() {
            if form.contains(' ') {
                continue;
            }
            let roots = an.candidate_roots(&form).unwrap();
            assert!(roots.iter().any(|r| keys.contains(r)), "{form} from {}", e.lemma);
        }
    }
}

#[test]
fn generated_forms_analyze_back() {
    let (lex, g) = fixture();
    for e in lex.entries() {
        let p = lex.paradigm_of(e).unwrap();
        for (form, tag) in generate(e, p).unwrap() {
            if form.contains(' ') {
                continue;
            }
            let out = analyze(&form, &lex, &g).unwrap();
            assert!(out.iter().any(|a| a.lemma == e.lemma && a.tag == tag), "{form} {tag}");
        }
    }
}

#[test]
fn export_and_analysis_agree() {
    let (lex, g) = fixture();
    let lines = fullform_lines(&lex).unwrap();
    let table = FullFormTable::from_lines(&lines);
    for (form, expected) in table.iter() {
        let got: BTreeSet<(String, String)> = analyze(form, &lex, &g)
            .unwrap()
            .into_iter()
            .filter(|a| a.provenance == Provenance::Lexicon && a.surface == form)
            .map(|a| (a.tag.render(), a.lemma))
            .collect();
        // exact-case export lines, plus lowercase lines a capitalized surface also matches
        let mut want: BTreeSet<(String, String)> = expected.iter().map(|(t, l)| (t.render(), l.clone())).collect();
        if crate::text::starts_uppercase(form) {
            for (t, l) in table.get(&crate::text::lower_first(form)) {
                want.insert((t.render(), l.clone()));
            }
        }
        assert_eq!(got, want, "{form}");
    }
}

#[test]
fn direct_readings_regenerate_the_surface() {
    let (lex, g) = fixture();
    let an = Analyzer::new(&lex).with_guesser(&g);
    let forms: BTreeSet<String> = fullform_lines(&lex).unwrap().into_iter().map(|l| l.form).collect();
    for form in forms.iter().chain(["Winde".to_string(), "Dank".to_string()].iter()) {
        for a in an.analyze(form).unwrap() {
            let entries = lex.lookup_stem(&a.lemma);
            let regenerated = entries.iter().any(|e| {
                let p = lex.paradigm_of(e).unwrap();
                generate(e, p)
                    .unwrap()
                    .iter()
                    .any(|(f, t)| *t == a.tag && surface_matches(f, &a.surface))
            });
            assert!(regenerated, "{form} {} {}", a.lemma, a.tag);
        }
    }
}

#[test]
fn output_is_sorted_and_unique() {
    let (lex, g) = fixture();
    for form in ["Winde", "Weise", "Staubecken", "Xylopharen", "meine"] {
        let out = analyze(form, &lex, &g).unwrap();
        let keys: Vec<_> = out.iter().map(|a| a.sort_key()).collect();
        let mut sorted = keys.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(keys, sorted, "{form}");
    }
}

fn split(lex: &Lexicon, form: &str) -> Vec<Vec<(String, String)>> {
    Analyzer::new(lex)
        .split_compound(form)
        .into_iter()
        .map(|s| s.segments.into_iter().map(|g| (g.piece, g.linker)).collect())
        .collect()
}

fn pl(parts: &[(&str, &str)]) -> Vec<(String, String)> {
    parts.iter().map(|(p, l)| (p.to_string(), l.to_string())).collect()
}

#[test]
fn compound_examples() {
    let (lex, _) = fixture();
    assert_eq!(split(&lex, "Hausmeister"), vec![pl(&[("Haus", ""), ("meister", "")])]);
    assert_eq!(split(&lex, "Häusermeer"), vec![pl(&[("Häuser", ""), ("meer", "")])]);
    assert_eq!(
        split(&lex, "Schweinebauch"),
        vec![pl(&[("Schwein", "e"), ("bauch", "")])]
    );
    assert_eq!(
        split(&lex, "Schweinsblase"),
        vec![pl(&[("Schwein", "s"), ("blase", "")])]
    );
    assert_eq!(split(&lex, "Schweinkram"), vec![pl(&[("Schwein", ""), ("kram", "")])]);
    // longer head first
    assert_eq!(
        split(&lex, "Staubecken"),
        vec![pl(&[("Stau", ""), ("becken", "")]), pl(&[("Staub", ""), ("ecken", "")])]
    );
}

#[test]
fn compound_lemmas_and_tags() {
    let (lex, g) = fixture();
    let out = analyze("Staubecken", &lex, &g).unwrap();
    let lemmas: BTreeSet<&str> = out.iter().map(|a| a.lemma.as_str()).collect();
    assert_eq!(lemmas, ["Staubecke", "Staubecken"].into_iter().collect());
    assert!(out.iter().all(|a| a.provenance == Provenance::Compound));
    let haeuser = analyze("Häusermeer", &lex, &g).unwrap();
    assert_eq!(haeuser[0].segments[0].lemma, "Haus");
    assert!(haeuser.iter().any(|a| a.tag == parse_tag("SUB NOM SIN NEU").unwrap()));
}

#[test]
fn direct_readings_suppress_compounds() {
    // Winden has direct readings, so the splitter is never consulted
    let (lex, g) = fixture();
    let out = analyze("Winden", &lex, &g).unwrap();
    assert!(out.iter().all(|a| a.provenance == Provenance::Lexicon));
}

/// Keys of noun/verb/adjective entries, computed from the entries alone.
fn oracle_stem_keys(lex: &Lexicon) -> BTreeSet<String> {
    let mut keys = BTreeSet::new();
    for e in lex.entries() {
        if !matches!(e.pos, Pos::Sub | Pos::Ver | Pos::Adj) {
            continue;
        }
        let p = lex.paradigm_of(e).unwrap();
        let prefix = e.separable_prefix.clone().unwrap_or_default();
        keys.insert(e.lemma.clone());
        keys.insert(format!("{prefix}{}", base_stem(e, p).unwrap()));
        for a in e.alternants.values() {
            keys.insert(format!("{prefix}{a}"));
        }
    }
    keys
}

fn variants(p: &str) -> [String; 3] {
    [p.to_string(), upper_first(p), lower_first(p)]
}

/// Brute force: every split point and linker choice, each segment checked
/// against the export table and the stem keys.
fn oracle_split(lex: &Lexicon, form: &str) -> BTreeSet<Vec<(String, String)>> {
    let table = FullFormTable::from_lines(&fullform_lines(lex).unwrap());
    let stems = oracle_stem_keys(lex);
    let has_form = |p: &str, nouns_only: bool| {
        variants(p).iter().any(|v| {
            table.get(v).iter().any(|(t, _)| {
                if nouns_only {
                    t.pos == Pos::Sub
                } else {
                    matches!(t.pos, Pos::Sub | Pos::Ver | Pos::Adj)
                }
            })
        })
    };
    let is_stem = |p: &str| variants(p).iter().any(|v| stems.contains(v));
    let chars: Vec<char> = form.chars().collect();
    let n = chars.len();
    let linkers = ["", "e", "s", "es", "en", "er", "n"];
    let mut out = BTreeSet::new();
    // bitmask over the n-1 gaps marks segment boundaries
    for mask in 1u32..(1 << (n - 1)) {
        let mut spans = Vec::new();
        let mut start = 0;
        for gap in 0..n - 1 {
            if mask & (1 << gap) != 0 {
                spans.push(chars[start..=gap].iter().collect::<String>());
                start = gap + 1;
            }
        }
        let head: String = chars[start..].iter().collect();
        if head.chars().count() < 3 || !has_form(&upper_first(&head), true) {
            continue;
        }
        // each modifier span independently picks its readings
        let mut options: Vec<Vec<(String, String)>> = Vec::new();
        for span in &spans {
            let mut stem_opts = Vec::new();
            let mut infl_opts = Vec::new();
            for l in linkers {
                if let Some(piece) = span.strip_suffix(l) {
                    if piece.chars().count() < 3 {
                        continue;
                    }
                    if is_stem(piece) {
                        stem_opts.push((piece.to_string(), l.to_string()));
                    }
                    if has_form(piece, false) {
                        infl_opts.push((piece.to_string(), l.to_string()));
                    }
                }
            }
            if stem_opts.iter().any(|(_, l)| !l.is_empty()) {
                infl_opts.retain(|(_, l)| !l.is_empty());
            }
            let mut all: Vec<(String, String)> = stem_opts.into_iter().chain(infl_opts).collect();
            all.sort();
            all.dedup();
            options.push(all);
        }
        let mut partial: Vec<Vec<(String, String)>> = vec![Vec::new()];
        for opts in &options {
            let mut next = Vec::new();
            for p in &partial {
                for o in opts {
                    let mut q = p.clone();
                    q.push(o.clone());
                    next.push(q);
                }
            }
            partial = next;
        }
        for mut p in partial {
            p.push((head.clone(), String::new()));
            out.insert(p);
        }
    }
    out
}

#[test]
fn splitter_matches_brute_force() {
    let (lex, _) = fixture();
    for form in [
        "Hausmeister",
        "Häusermeer",
        "Staubecken",
        "Schweinebauch",
        "Schweinsblase",
        "Schweinkram",
        "Meisterhaus",
        "Windmeister",
        "Gartenhausmeister",
        "Schweinemeer",
        "Xylophon",
    ] {
        let got: BTreeSet<Vec<(String, String)>> = split(&lex, form).into_iter().collect();
        assert_eq!(got, oracle_split(&lex, form), "{form}");
    }
}

#[test]
fn segmentation_order_is_longest_head_first() {
    let (lex, _) = fixture();
    for form in ["Staubecken", "Gartenhausmeister", "Windmeister"] {
        let segs = Analyzer::new(&lex).split_compound(form);
        for w in segs.windows(2) {
            let (a, b) = (&w[0], &w[1]);
            let ka = (core::cmp::Reverse(a.head().piece.chars().count()), a.segments.len());
            let kb = (core::cmp::Reverse(b.head().piece.chars().count()), b.segments.len());
            assert!(ka < kb || (ka == kb && a.segments <= b.segments), "{form}");
        }
    }
}

#[test]
fn custom_linkers_change_the_split() {
    let (lex, _) = fixture();
    let an = Analyzer::new(&lex).with_linkers(&["e"]);
    assert!(an.split_compound("Schweinsblase").is_empty());
    assert_eq!(an.split_compound("Schweinebauch").len(), 1);
}

#[test]
fn adding_a_stem_only_adds_readings() {
    let (lex, g) = fixture();
    let mut bigger = lex.clone();
    bigger
        .add_stem(StemEntry::new("Tisch", Pos::Sub, "noun-mas-e"))
        .unwrap();
    let forms: BTreeSet<String> = fullform_lines(&lex).unwrap().into_iter().map(|l| l.form).collect();
    for f in &forms {
        let before = readings(&analyze(f, &lex, &g).unwrap());
        let after = readings(&analyze(f, &bigger, &g).unwrap());
        assert!(before.is_subset(&after), "{f}");
    }
    assert!(analyze("Tisches", &bigger, &g)
        .unwrap()
        .iter()
        .any(|a| a.lemma == "Tisch" && a.tag == parse_tag("SUB GEN SIN MAS").unwrap()));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn analysis_is_deterministic(word in "[A-Za-zäöüß]{1,10}") {
        let (lex, g) = fixture();
        prop_assert_eq!(analyze(&word, &lex, &g).unwrap(), analyze(&word, &lex, &g).unwrap());
    }

    #[test]
    fn random_forms_have_readings(word in "[a-zäöü]{2,9}") {
        // with a guesser, every non-empty form gets at least one reading
        let (lex, g) = fixture();
        prop_assert!(!analyze(&word, &lex, &g).unwrap().is_empty());
    }
}
