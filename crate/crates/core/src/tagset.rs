//! Feature-bundle tags, their text form, and the coarse 51-tag projection.
//!
//! A [`Tag`] is a part of speech plus optional feature slots. The canonical
//! rendering joins the codes with single spaces in the fixed order
//! pos, usage, case, number, gender, person, verb form, degree, e.g.
//! `SUB NOM SIN FEM` or `PRO PER NOM SIN 1PE`. Parsing accepts the codes in
//! any order and canonicalizes.

use alloc::collections::BTreeSet;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

macro_rules! code_enum {
    ($(#[$meta:meta])* $name:ident { $($variant:ident => $code:literal),+ $(,)? }) => {
        $(#[$meta])*
        #[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
        pub enum $name {
            $($variant),+
        }

        impl $name {
            pub const ALL: &'static [$name] = &[$($name::$variant),+];

            pub fn code(self) -> &'static str {
                match self {
                    $($name::$variant => $code),+
                }
            }

            pub fn from_code(code: &str) -> Option<Self> {
                match code {
                    $($code => Some($name::$variant),)+
                    _ => None,
                }
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(self.code())
            }
        }
    };
}

code_enum! {
    /// Part of speech.
    Pos {
        Sub => "SUB",
        Eig => "EIG",
        Ver => "VER",
        Adj => "ADJ",
        Adv => "ADV",
        Art => "ART",
        Pro => "PRO",
        Pos => "POS",
        Prp => "PRP",
        Pop => "POP",
        Kon => "KON",
        Ptk => "PTK",
        Zal => "ZAL",
        Inj => "INJ",
        Abk => "ABK",
        Fre => "FRE",
        Tru => "TRU",
        Sze => "SZE",
        Szk => "SZK",
        Szi => "SZI",
    }
}

code_enum! {
    /// Usage or subtype: attributive/predicative use, pronoun kind, auxiliary, ...
    Usage {
        Att => "ATT",
        Prd => "PRD",
        Adv => "ADV",
        Sbs => "SBS",
        Per => "PER",
        Rfl => "RFL",
        Rzp => "RZP",
        Dem => "DEM",
        Rel => "REL",
        Ind => "IND",
        Inr => "INR",
        Def => "DEF",
        Aux => "AUX",
        Mod => "MOD",
        Neb => "NEB",
        Inf => "INF",
        Vgl => "VGL",
        Neg => "NEG",
        Zu => "ZU",
        Vzs => "VZS",
        Ant => "ANT",
        Adj => "ADJ",
        Art => "ART",
        Pro => "PRO",
        Zir => "ZIR",
    }
}

code_enum! {
    Case {
        Nom => "NOM",
        Gen => "GEN",
        Dat => "DAT",
        Akk => "AKK",
    }
}

code_enum! {
    Number {
        Sin => "SIN",
        Plu => "PLU",
    }
}

code_enum! {
    Gender {
        Mas => "MAS",
        Fem => "FEM",
        Neu => "NEU",
    }
}

code_enum! {
    Person {
        First => "1PE",
        Second => "2PE",
        Third => "3PE",
    }
}

code_enum! {
    /// Tense, mood and the non-finite verb forms.
    VerbForm {
        Pra => "PRÄ",
        Prt => "PRT",
        Kj1 => "KJ1",
        Kj2 => "KJ2",
        Imp => "IMP",
        Inf => "INF",
        Pa1 => "PA1",
        Pa2 => "PA2",
        Eiz => "EIZ",
    }
}

impl VerbForm {
    /// Tense and mood values, as opposed to the non-finite forms.
    pub fn is_finite(self) -> bool {
        matches!(self, Self::Pra | Self::Prt | Self::Kj1 | Self::Kj2 | Self::Imp)
    }
}

code_enum! {
    Degree {
        Gru => "GRU",
        Kom => "KOM",
        Sup => "SUP",
    }
}

impl Pos {
    pub fn allows_usage(self, usage: Usage) -> bool {
        use Usage as U;
        let allowed: &[Usage] = match self {
            Pos::Ver => &[U::Aux, U::Mod],
            Pos::Adj => &[U::Att, U::Prd, U::Adv],
            Pos::Adv => &[U::Inr, U::Dem, U::Rel, U::Pro],
            Pos::Art => &[U::Def, U::Ind],
            Pos::Pro => &[U::Per, U::Rfl, U::Rzp, U::Dem, U::Rel, U::Ind, U::Inr],
            Pos::Pos => &[U::Att, U::Sbs],
            Pos::Prp => &[U::Art, U::Zir],
            Pos::Kon => &[U::Neb, U::Inf, U::Vgl],
            Pos::Ptk => &[U::Neg, U::Zu, U::Vzs, U::Ant, U::Adj],
            _ => &[],
        };
        allowed.contains(&usage)
    }

    fn usage_count(self) -> u64 {
        Usage::ALL.iter().filter(|u| self.allows_usage(**u)).count() as u64
    }

    pub fn has_case(self) -> bool {
        matches!(self, Pos::Sub | Pos::Eig | Pos::Adj | Pos::Art | Pos::Pro | Pos::Pos)
    }

    pub fn has_number(self) -> bool {
        self.has_case() || self == Pos::Ver
    }

    pub fn has_gender(self) -> bool {
        self.has_case()
    }

    pub fn has_person(self) -> bool {
        matches!(self, Pos::Ver | Pos::Pro)
    }

    pub fn has_verb_form(self) -> bool {
        self == Pos::Ver
    }

    pub fn has_degree(self) -> bool {
        matches!(self, Pos::Adj | Pos::Adv)
    }

    /// Nouns are written capitalized; everything else is lowercase in citation form.
    pub fn is_nominal(self) -> bool {
        matches!(self, Pos::Sub | Pos::Eig)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TagError {
    #[error("empty tag")]
    Empty,
    #[error("unknown tag code `{0}`")]
    UnknownCode(String),
    #[error("feature `{code}` is not legal for part of speech {pos}")]
    IllegalFeatureForPos { pos: Pos, code: String },
    #[error("feature slot filled twice by `{0}`")]
    DuplicateFeature(String),
}

/// A part of speech plus its feature bundle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Tag {
    pub pos: Pos,
    pub usage: Option<Usage>,
    pub case: Option<Case>,
    pub number: Option<Number>,
    pub gender: Option<Gender>,
    pub person: Option<Person>,
    pub form: Option<VerbForm>,
    pub degree: Option<Degree>,
}

enum Slot {
    Usage(Usage),
    Case(Case),
    Number(Number),
    Gender(Gender),
    Person(Person),
    Form(VerbForm),
    Degree(Degree),
}

impl Tag {
    pub const fn new(pos: Pos) -> Self {
        Self {
            pos,
            usage: None,
            case: None,
            number: None,
            gender: None,
            person: None,
            form: None,
            degree: None,
        }
    }

    /// The codes in canonical order, pos first.
    pub fn codes(&self) -> Vec<&'static str> {
        let mut out = Vec::with_capacity(8);
        out.push(self.pos.code());
        out.extend(self.usage.map(Usage::code));
        out.extend(self.case.map(Case::code));
        out.extend(self.number.map(Number::code));
        out.extend(self.gender.map(Gender::code));
        out.extend(self.person.map(Person::code));
        out.extend(self.form.map(VerbForm::code));
        out.extend(self.degree.map(Degree::code));
        out
    }

    pub fn render(&self) -> String {
        self.to_string()
    }

    /// True when every feature set on `pattern` is present with the same
    /// value on `self` and the parts of speech agree.
    pub fn matches_pattern(&self, pattern: &Tag) -> bool {
        fn sub<T: PartialEq>(want: Option<T>, have: Option<T>) -> bool {
            want.is_none() || want == have
        }
        self.pos == pattern.pos
            && sub(pattern.usage, self.usage)
            && sub(pattern.case, self.case)
            && sub(pattern.number, self.number)
            && sub(pattern.gender, self.gender)
            && sub(pattern.person, self.person)
            && sub(pattern.form, self.form)
            && sub(pattern.degree, self.degree)
    }

    /// True when only the part of speech is set.
    pub fn is_bare(&self) -> bool {
        *self == Tag::new(self.pos)
    }

    /// Drops tense and mood: the granularity of the large tagging tag set.
    pub fn without_tense_mood(mut self) -> Tag {
        if self.form.is_some_and(VerbForm::is_finite) {
            self.form = None;
        }
        self
    }

    fn classify(pos: Pos, code: &str) -> Result<Slot, TagError> {
        let mut known = false;
        if let Some(u) = Usage::from_code(code) {
            known = true;
            if pos.allows_usage(u) {
                return Ok(Slot::Usage(u));
            }
        }
        macro_rules! try_slot {
            ($ty:ident, $legal:ident, $variant:ident) => {
                if let Some(v) = $ty::from_code(code) {
                    known = true;
                    if pos.$legal() {
                        return Ok(Slot::$variant(v));
                    }
                }
            };
        }
        try_slot!(Case, has_case, Case);
        try_slot!(Number, has_number, Number);
        try_slot!(Gender, has_gender, Gender);
        try_slot!(Person, has_person, Person);
        try_slot!(VerbForm, has_verb_form, Form);
        try_slot!(Degree, has_degree, Degree);
        if known {
            Err(TagError::IllegalFeatureForPos {
                pos,
                code: code.to_string(),
            })
        } else {
            Err(TagError::UnknownCode(code.to_string()))
        }
    }
}

/// Parses a tag from its space-separated codes; feature order is free.
pub fn parse_tag(text: &str) -> Result<Tag, TagError> {
    let mut codes = text.split_whitespace();
    let first = codes.next().ok_or(TagError::Empty)?;
    let pos = Pos::from_code(first).ok_or_else(|| TagError::UnknownCode(first.to_string()))?;
    let mut tag = Tag::new(pos);
    for code in codes {
        fn put<T>(slot: &mut Option<T>, v: T, code: &str) -> Result<(), TagError> {
            if slot.is_some() {
                return Err(TagError::DuplicateFeature(code.to_string()));
            }
            *slot = Some(v);
            Ok(())
        }
        match Tag::classify(pos, code)? {
            Slot::Usage(v) => put(&mut tag.usage, v, code)?,
            Slot::Case(v) => put(&mut tag.case, v, code)?,
            Slot::Number(v) => put(&mut tag.number, v, code)?,
            Slot::Gender(v) => put(&mut tag.gender, v, code)?,
            Slot::Person(v) => put(&mut tag.person, v, code)?,
            Slot::Form(v) => put(&mut tag.form, v, code)?,
            Slot::Degree(v) => put(&mut tag.degree, v, code)?,
        }
    }
    Ok(tag)
}

impl FromStr for Tag {
    type Err = TagError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_tag(s)
    }
}

impl fmt::Display for Tag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, code) in self.codes().into_iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            f.write_str(code)?;
        }
        Ok(())
    }
}

/// Number of syntactically valid feature bundles (every legal slot may be
/// empty or take any of its values).
pub fn valid_tag_count() -> u64 {
    Pos::ALL
        .iter()
        .map(|&pos| {
            let slot = |legal: bool, n: usize| if legal { 1 + n as u64 } else { 1 };
            (1 + pos.usage_count())
                * slot(pos.has_case(), Case::ALL.len())
                * slot(pos.has_number(), Number::ALL.len())
                * slot(pos.has_gender(), Gender::ALL.len())
                * slot(pos.has_person(), Person::ALL.len())
                * slot(pos.has_verb_form(), VerbForm::ALL.len())
                * slot(pos.has_degree(), Degree::ALL.len())
        })
        .sum()
}

/// Which tag granularity the tagger and lemmatizer operate on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TagsetMode {
    Large,
    Small,
}

impl TagsetMode {
    pub fn name(self) -> &'static str {
        match self {
            TagsetMode::Large => "large",
            TagsetMode::Small => "small",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        match name {
            "large" => Some(TagsetMode::Large),
            "small" => Some(TagsetMode::Small),
            _ => None,
        }
    }

    /// Brings an analyzer tag to this mode's granularity.
    pub fn project(self, tag: &Tag, mapping: &TagsetMapping) -> Tag {
        match self {
            TagsetMode::Large => tag.without_tense_mood(),
            TagsetMode::Small => mapping.map(tag),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MappingError {
    #[error("line {line}: {source}")]
    Tag { line: usize, source: TagError },
    #[error("line {line}: expected `pattern<TAB>small-tag`")]
    Malformed { line: usize },
    #[error("no catch-all rule for part of speech {0}")]
    MissingCatchAll(Pos),
    #[error("line {line}: rule follows the catch-all for {pos} and can never match")]
    Unreachable { line: usize, pos: Pos },
    #[error("small tag {0} does not map to itself")]
    NotIdempotent(String),
    #[error("target {small} of pattern {pattern} has a different part of speech")]
    PosChange { pattern: String, small: String },
}

/// Ordered first-match rules from large tags to the small inventory.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TagsetMapping {
    rules: Vec<(Tag, Tag)>,
    inventory: BTreeSet<Tag>,
}

impl TagsetMapping {
    /// Parses `large-pattern<TAB>small-tag` lines.
    pub fn parse(text: &str) -> Result<Self, MappingError> {
        let mut rules = Vec::new();
        let mut closed: BTreeSet<Pos> = BTreeSet::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let trimmed = raw.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let (pattern, small) = raw.split_once('\t').ok_or(MappingError::Malformed { line })?;
            let pattern = parse_tag(pattern).map_err(|source| MappingError::Tag { line, source })?;
            let small = parse_tag(small).map_err(|source| MappingError::Tag { line, source })?;
            if closed.contains(&pattern.pos) {
                return Err(MappingError::Unreachable { line, pos: pattern.pos });
            }
            if small.pos != pattern.pos {
                return Err(MappingError::PosChange {
                    pattern: pattern.render(),
                    small: small.render(),
                });
            }
            if pattern.is_bare() {
                closed.insert(pattern.pos);
            }
            rules.push((pattern, small));
        }
        if let Some(pos) = Pos::ALL.iter().find(|p| !closed.contains(p)) {
            return Err(MappingError::MissingCatchAll(*pos));
        }
        let inventory = rules.iter().map(|(_, small)| *small).collect();
        let mapping = Self { rules, inventory };
        for small in &mapping.inventory {
            if mapping.map(small) != *small {
                return Err(MappingError::NotIdempotent(small.render()));
            }
        }
        Ok(mapping)
    }

    /// The shipped 51-tag mapping.
    pub fn default_small() -> Self {
        Self::parse(crate::data::TAGSET_MAPPING).expect("shipped tag set mapping is valid")
    }

    pub fn map(&self, tag: &Tag) -> Tag {
        self.rules
            .iter()
            .find(|(pattern, _)| tag.matches_pattern(pattern))
            .map(|(_, small)| *small)
            .expect("mapping has a catch-all for every part of speech")
    }

    pub fn inventory(&self) -> &BTreeSet<Tag> {
        &self.inventory
    }

    pub fn rules(&self) -> &[(Tag, Tag)] {
        &self.rules
    }
}

impl Default for TagsetMapping {
    fn default() -> Self {
        Self::default_small()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn t(s: &str) -> Tag {
        parse_tag(s).unwrap()
    }

    #[test]
    fn parses_table_rows() {
        let noun = t("SUB NOM SIN FEM");
        assert_eq!(noun.pos, Pos::Sub);
        assert_eq!(noun.case, Some(Case::Nom));
        assert_eq!(noun.gender, Some(Gender::Fem));
        let imp = t("VER SIN IMP");
        assert_eq!(imp.form, Some(VerbForm::Imp));
        assert_eq!(imp.render(), "VER SIN IMP");
    }

    #[test]
    fn canonicalizes_feature_order() {
        assert_eq!(t("SUB AKK FEM SIN").render(), "SUB AKK SIN FEM");
        assert_eq!(t("POS AKK SIN FEM ATT").render(), "POS ATT AKK SIN FEM");
        assert_eq!(t("VER 1PE SIN").render(), "VER SIN 1PE");
        assert_eq!(t("  PRO PER   NOM SIN 1PE ").render(), "PRO PER NOM SIN 1PE");
    }

    #[test]
    fn rejects_illegal_and_unknown() {
        assert!(matches!(
            parse_tag("SUB IMP"),
            Err(TagError::IllegalFeatureForPos { pos: Pos::Sub, .. })
        ));
        assert!(matches!(parse_tag("XYZ"), Err(TagError::UnknownCode(_))));
        assert!(matches!(parse_tag("SUB FOO"), Err(TagError::UnknownCode(_))));
        assert!(matches!(parse_tag("SUB NOM GEN"), Err(TagError::DuplicateFeature(_))));
        assert_eq!(parse_tag("   "), Err(TagError::Empty));
    }

    #[test]
    fn context_dependent_codes() {
        assert_eq!(t("KON INF").usage, Some(Usage::Inf));
        assert_eq!(t("VER INF").form, Some(VerbForm::Inf));
        assert_eq!(t("ADJ ADV").usage, Some(Usage::Adv));
        assert_eq!(t("PTK ADJ").usage, Some(Usage::Adj));
    }

    #[test]
    fn usage_codes_resolve_to_one_slot_per_pos() {
        // a code legal in two slots of the same pos would make parsing ambiguous
        for &pos in Pos::ALL {
            for &u in Usage::ALL {
                if !pos.allows_usage(u) {
                    continue;
                }
                let other = VerbForm::from_code(u.code()).is_some() && pos.has_verb_form()
                    || Case::from_code(u.code()).is_some() && pos.has_case();
                assert!(!other, "{pos} {u}");
            }
        }
    }

    #[test]
    fn shipped_mapping_has_51_tags() {
        let m = TagsetMapping::default_small();
        assert_eq!(m.inventory().len(), 51);
    }

    #[test]
    fn small_mapping_examples() {
        let m = TagsetMapping::default_small();
        assert_eq!(m.map(&t("PRO PER NOM SIN 1PE")).render(), "PRO PER");
        assert_eq!(m.map(&t("POS AKK SIN FEM ATT")).render(), "POS ATT");
        assert_eq!(m.map(&t("SZE")).render(), "SZE");
        assert_eq!(m.map(&t("VER SIN 1PE PRÄ")).render(), "VER");
        assert_eq!(m.map(&t("SUB AKK SIN FEM")).render(), "SUB");
        assert_eq!(m.map(&t("VER AUX INF")).render(), "VER AUX");
    }

    #[test]
    fn mapping_requires_catch_alls() {
        let err = TagsetMapping::parse("SUB\tSUB\n").unwrap_err();
        assert!(matches!(err, MappingError::MissingCatchAll(_)));
        let mut text = String::from(crate::data::TAGSET_MAPPING);
        text.push_str("SUB NOM\tSUB\n");
        assert!(matches!(
            TagsetMapping::parse(&text),
            Err(MappingError::Unreachable { pos: Pos::Sub, .. })
        ));
    }

    #[test]
    fn large_projection_drops_tense_and_mood_only() {
        assert_eq!(t("VER SIN 1PE PRÄ").without_tense_mood().render(), "VER SIN 1PE");
        assert_eq!(t("VER SIN IMP").without_tense_mood().render(), "VER SIN");
        assert_eq!(t("VER PA2").without_tense_mood().render(), "VER PA2");
        assert_eq!(t("SUB DAT SIN MAS").without_tense_mood().render(), "SUB DAT SIN MAS");
    }

    #[test]
    fn valid_count_is_in_the_thousands() {
        let n = valid_tag_count();
        assert!(n > 1000, "{n}");
    }

    fn arb_tag() -> impl Strategy<Value = Tag> {
        (
            0..Pos::ALL.len(),
            proptest::option::of(0..Usage::ALL.len()),
            proptest::option::of(0..Case::ALL.len()),
            proptest::option::of(0..Number::ALL.len()),
            proptest::option::of(0..Gender::ALL.len()),
            proptest::option::of(0..Person::ALL.len()),
            proptest::option::of(0..VerbForm::ALL.len()),
            proptest::option::of(0..Degree::ALL.len()),
        )
            .prop_map(|(p, u, c, n, g, pe, f, d)| {
                let pos = Pos::ALL[p];
                Tag {
                    pos,
                    usage: u.map(|i| Usage::ALL[i]).filter(|u| pos.allows_usage(*u)),
                    case: c.map(|i| Case::ALL[i]).filter(|_| pos.has_case()),
                    number: n.map(|i| Number::ALL[i]).filter(|_| pos.has_number()),
                    gender: g.map(|i| Gender::ALL[i]).filter(|_| pos.has_gender()),
                    person: pe.map(|i| Person::ALL[i]).filter(|_| pos.has_person()),
                    form: f.map(|i| VerbForm::ALL[i]).filter(|_| pos.has_verb_form()),
                    degree: d.map(|i| Degree::ALL[i]).filter(|_| pos.has_degree()),
                }
            })
    }

    proptest! {
        #[test]
        fn render_parse_round_trip(tag in arb_tag()) {
            prop_assert_eq!(parse_tag(&tag.render()).unwrap(), tag);
        }

        #[test]
        fn mapping_is_total_and_lands_in_inventory(tag in arb_tag()) {
            let m = TagsetMapping::default_small();
            let small = m.map(&tag);
            prop_assert!(m.inventory().contains(&small));
            prop_assert_eq!(m.map(&small), small);
            prop_assert_eq!(m.map(&tag.without_tense_mood()), small);
        }
    }
}
