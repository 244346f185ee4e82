use std::io::Cursor;

use aqa_core::corpus::{read_corpus, validate_entry, write_corpus, CorpusEntry};
use aqa_core::logic::{Functor, Predicate, Variable};
use aqa_core::ner::{recognize, Gazetteer};
use aqa_core::retrieval::{html_to_text, Passage};
use aqa_core::{normalize, tokenize, Domain, ExpectedAnswerType, LogicForm, Question, QuestionAnalysis, Source};
use proptest::prelude::*;

/// Arabic letters, diacritics, tatweel, both digit systems, punctuation, Latin and whitespace.
fn arabic_char() -> impl Strategy<Value = char> {
    prop_oneof![
        8 => prop::char::range('\u{0621}', '\u{064A}'),
        2 => prop::char::range('\u{064B}', '\u{0652}'),
        1 => Just('\u{0640}'),
        1 => prop::char::range('\u{0660}', '\u{0669}'),
        1 => prop::char::range('0', '9'),
        1 => prop::sample::select(vec!['؟', '?', '.', '،', '؛', '!', ':', '(', ')', '«', '»', ',', ';', '/', '-']),
        1 => prop::char::range('a', 'z'),
        3 => prop::sample::select(vec![' ', ' ', '\n', '\t', '\u{00A0}']),
        1 => any::<char>(),
    ]
}

fn arabic_text(max: usize) -> impl Strategy<Value = String> {
    prop::collection::vec(arabic_char(), 0..max).prop_map(|cs| cs.into_iter().collect())
}

fn arabic_word() -> impl Strategy<Value = String> {
    prop::collection::vec(
        prop_oneof![4 => prop::char::range('\u{0621}', '\u{064A}'), 1 => prop::char::range('\u{064B}', '\u{0652}')],
        1..8,
    )
    .prop_map(|cs| {
        let mut s: String = cs.into_iter().collect();
        // a word cannot start with a combining mark in the stored focus
        s.insert(0, 'ب');
        s
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2048))]

    #[test]
    fn normalize_is_idempotent(s in arabic_text(80)) {
        let once = normalize(&s);
        prop_assert_eq!(normalize(&once), once);
    }

    #[test]
    fn tokenize_is_total(s in arabic_text(80)) {
        let tokens = tokenize(&s);
        let joined: String = tokens.iter().map(|t| t.surface.as_str()).collect::<String>()
            .chars().filter(|c| !c.is_whitespace()).collect();
        let expected: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        prop_assert_eq!(joined, expected);
        let mut last = 0;
        for t in &tokens {
            prop_assert!(t.span.start >= last && t.span.end > t.span.start);
            prop_assert_eq!(&s[t.span.clone()], t.surface.as_str());
            prop_assert!(s[last..t.span.start].chars().all(char::is_whitespace));
            last = t.span.end;
        }
    }
}

/// Markup fragments, well-formed and broken, that are shuffled into documents.
fn markup() -> impl Strategy<Value = String> {
    let fragment = prop_oneof![
        prop::sample::select(vec![
            "<p>",
            "</p>",
            "<div class=\"x\">",
            "</div>",
            "<br>",
            "<br/>",
            "<td>",
            "<a href='/x?a<b'>",
            "<script>var s = '<p>';</script>",
            "<style>p{}</style>",
            "<!-- <p> -->",
            "<!DOCTYPE html>",
            "&lt;p&gt;",
            "&lt;div",
            "&#60;b",
            "&amp;lt;i",
            "<",
            "<p",
            "</",
            "<<b>>",
            "< p>",
            "<3",
            "<ب>",
            "<img src=x",
            "<![CDATA[<x>]]>",
            ">",
            "&",
            "&nbsp;",
            "<P>",
            "<TITLE>t</TITLE>",
        ])
        .prop_map(str::to_string),
        arabic_text(20),
        "[a-zA-Z<>/ ]{0,10}",
    ];
    prop::collection::vec(fragment, 0..30).prop_map(|v| v.concat())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2048))]

    #[test]
    fn html_to_text_leaves_no_tags(html in markup()) {
        let text = html_to_text(&html);
        let chars: Vec<char> = text.chars().collect();
        for w in chars.windows(2) {
            prop_assert!(!(w[0] == '<' && w[1].is_ascii_alphabetic()), "{:?} -> {:?}", html, text);
        }
        // '<' followed by '/' and a letter is also a tag opener
        prop_assert!(!text.contains("</") || !chars.windows(3).any(|w| w[0] == '<' && w[1] == '/' && w[2].is_ascii_alphabetic()));
    }
}

fn entity_type() -> impl Strategy<Value = ExpectedAnswerType> {
    prop::sample::select(ExpectedAnswerType::ALL.to_vec())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    /// Growing the gazetteer never loses a mention: every earlier mention is
    /// still covered by a mention of the same type.
    #[test]
    fn ner_monotone_under_gazetteer_growth(
        words in prop::collection::vec(arabic_word(), 1..12),
        picks in prop::collection::vec((0usize..12, 1usize..4, entity_type()), 0..6),
    ) {
        let text = words.join(" ");
        let mut gaz = Gazetteer::builtin();
        let before = recognize(&text, &gaz);
        for (start, len, ty) in picks {
            let start = start % words.len();
            let end = (start + len).min(words.len());
            gaz.insert(ty, &words[start..end].join(" "));
        }
        let after = recognize(&text, &gaz);
        for m in &before {
            prop_assert!(
                after.iter().any(|n| n.entity_type == m.entity_type
                    && n.span.start <= m.span.start && m.span.end <= n.span.end),
                "lost {:?}", m
            );
        }
        prop_assert_eq!(recognize(&text, &gaz), after, "deterministic");
    }
}

const PARTICLES: [(&str, ExpectedAnswerType); 6] = [
    ("من", ExpectedAnswerType::Person),
    ("أين", ExpectedAnswerType::Location),
    ("متى", ExpectedAnswerType::Date),
    ("ماهي", ExpectedAnswerType::Organization),
    ("ماهو", ExpectedAnswerType::Organization),
    ("كم", ExpectedAnswerType::NumericExpression),
];

fn passage() -> impl Strategy<Value = Passage> {
    (
        arabic_text(60),
        "https://[a-z]{1,8}\\.example/[a-z0-9]{0,6}",
        0u32..20,
        1usize..11,
        0usize..50,
        0usize..5,
        any::<bool>(),
        any::<bool>(),
    )
        .prop_map(|(text, source_url, score, source_rank, position, keyword_hits, focus_hit, ne_validated)| {
            Passage { text, source_url, score, source_rank, position, keyword_hits, focus_hit, ne_validated }
        })
}

fn logic_form(ty: ExpectedAnswerType) -> impl Strategy<Value = Option<LogicForm>> {
    let functor = "[\u{0628}-\u{064A}]{1,6}";
    prop::option::of((functor, prop::collection::vec(functor, 0..3)).prop_map(move |(rel, mods)| {
        use Variable::{X, Y};
        let mut conjuncts =
            vec![Predicate::answer_type(ty), Predicate::new(Functor::Lexical(rel), vec![Y, X]).unwrap()];
        conjuncts.extend(mods.into_iter().map(|m| Predicate::new(Functor::Lexical(m), vec![Y]).unwrap()));
        LogicForm::new(vec![X, Y], conjuncts).unwrap()
    }))
}

fn corpus_entry() -> impl Strategy<Value = CorpusEntry> {
    (0..PARTICLES.len(), prop::collection::vec(arabic_word(), 1..6), "[a-z0-9_-]{1,10}")
        .prop_flat_map(|(pi, words, id)| {
            let (particle, ty) = PARTICLES[pi];
            let text = format!("{particle} {}؟", words.join(" "));
            (
                Just((particle, ty, text, id)),
                prop::sample::select(Source::ALL.to_vec()),
                prop::sample::select(Domain::ALL.to_vec()),
                entity_type(),
                prop::collection::vec(arabic_text(12), 0..5),
                prop::collection::vec(arabic_word(), 0..3),
                arabic_text(40),
                logic_form(ty),
                prop::collection::vec(passage(), 0..4),
                prop::option::of((arabic_word(), arabic_text(40))),
                any::<bool>(),
            )
        })
        .prop_map(
            |(
                (particle, ty, text, id),
                source,
                domain,
                eat,
                keywords,
                focus,
                declarative,
                lf,
                passages,
                answer,
                found,
            )| {
                let mut question = Question::new(id, text, source, domain);
                let mut validated_text = None;
                let mut answer_found = false;
                if let Some((gold, extra)) = answer {
                    if found {
                        validated_text = Some(format!("{extra} {gold}"));
                        answer_found = true;
                    }
                    question.gold_answer = Some(gold);
                }
                CorpusEntry {
                    question,
                    analysis: QuestionAnalysis {
                        interrogative_particle: particle.to_string(),
                        question_type: ty,
                        expected_answer_type: eat,
                        keywords,
                        focus,
                        declarative_form: declarative,
                    },
                    logic_form: lf,
                    passages,
                    validated_text,
                    answer_found,
                }
            },
        )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn corpus_round_trip(entries in prop::collection::vec(corpus_entry(), 0..6)) {
        let mut buf = Vec::new();
        write_corpus(&entries, &mut buf).unwrap();
        let back = read_corpus(Cursor::new(&buf)).unwrap();
        prop_assert_eq!(&back, &entries);
        let mut again = Vec::new();
        write_corpus(&back, &mut again).unwrap();
        prop_assert_eq!(again, buf);
    }

    #[test]
    fn corpus_files_round_trip(entries in prop::collection::vec(corpus_entry(), 1..4)) {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("corpus.jsonl");
        aqa_core::corpus::save_corpus(&entries, &path).unwrap();
        prop_assert_eq!(aqa_core::corpus::load_corpus(&path).unwrap(), entries);
    }

    #[test]
    fn validation_is_monotone_in_text_growth(
        gold in arabic_word(),
        prefix in arabic_text(30),
        suffix in arabic_text(30),
        extra in arabic_text(30),
    ) {
        let q = Question::new("m", "من صمم برج ايفل؟", Source::Faq, Domain::WorldNews).with_gold_answer(gold.clone());
        let analysis = aqa_core::Resources::builtin().question_analyzer().analyze(&q).unwrap();
        let text = format!("{prefix} {gold} {suffix}");
        let mut entry = CorpusEntry::new(q.clone(), analysis.clone());
        prop_assert!(validate_entry(&mut entry, &text).unwrap());
        let longer = text + &extra;
        let mut grown = CorpusEntry::new(q, analysis);
        prop_assert!(validate_entry(&mut grown, &longer).unwrap());
    }
}
