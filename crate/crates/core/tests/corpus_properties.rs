use std::collections::HashSet;

use hazelkit::corpus::{
    clean_text, ingest_dir, read_excerpts, sample_excerpts, write_excerpts, Document, Excerpt, SampleParams,
};
use hazelkit::text::split_sentences;
use proptest::prelude::*;

/// A document of `sentences` sentences whose lengths cycle through 8..=19 words.
fn synthetic_doc(id: &str, sentences: usize, salt: usize) -> Document {
    let words = ["stone", "walls", "need", "care", "and", "lime", "mortar", "helps", "them", "breathe"];
    let text: Vec<String> = (0..sentences)
        .map(|i| {
            let len = 8 + (i * 7 + salt) % 12;
            let mut s: Vec<&str> = (0..len).map(|j| words[(i + j + salt) % words.len()]).collect();
            s[0] = "Old";
            format!("{}.", s.join(" "))
        })
        .collect();
    Document::from_raw(id, &text.join(" "), format!("{id}.txt"))
}

fn corpus() -> Vec<Document> {
    (0..6).map(|i| synthetic_doc(&format!("doc{i}"), 120, i)).collect()
}

fn check_excerpts(corpus: &[Document], excerpts: &[Excerpt], params: SampleParams) {
    let split: Vec<_> = corpus.iter().map(|d| split_sentences(&d.text).unwrap()).collect();
    let mut used = HashSet::new();
    for e in excerpts {
        assert!(e.word_count >= params.min_words && e.word_count <= params.max_words, "{}", e.id);
        let sentences = &split[corpus.iter().position(|d| d.id == e.document_id).unwrap()];
        let joined: Vec<&str> = sentences[e.sentence_start..=e.sentence_end].iter().map(|s| s.text.as_str()).collect();
        assert_eq!(e.text, joined.join(" "), "{} is not sentence-aligned", e.id);
        for i in e.sentence_start..=e.sentence_end {
            assert!(used.insert((e.document_id.clone(), i)), "{} overlaps", e.id);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn cleaning_is_idempotent(raw in "[ a-zA-Z.\\n\\t]{0,200}") {
        let once = clean_text(&raw);
        prop_assert_eq!(clean_text(&once), once.clone());
        prop_assert!(!once.contains('\n') && !once.contains("  "));
    }

    #[test]
    fn samples_are_bounded_aligned_and_disjoint(seed in any::<u64>(), n in 1usize..25, min in 40usize..80) {
        let corpus = corpus();
        let params = SampleParams { n, min_words: min, max_words: min + 30, seed };
        let excerpts = sample_excerpts(&corpus, params).unwrap();
        prop_assert_eq!(excerpts.len(), n);
        check_excerpts(&corpus, &excerpts, params);
        prop_assert_eq!(sample_excerpts(&corpus, params).unwrap(), excerpts);
    }

    #[test]
    fn excerpt_csv_round_trips(seed in any::<u64>(), revise in any::<bool>()) {
        let params = SampleParams { n: 5, min_words: 40, max_words: 70, seed };
        let mut excerpts = sample_excerpts(&corpus(), params).unwrap();
        if revise {
            for e in &mut excerpts {
                e.revised_text = Some(format!("Short, \"quoted\" version of {}.\nSecond line.", e.id));
            }
        }
        let mut buf = Vec::new();
        write_excerpts(&excerpts, &mut buf).unwrap();
        prop_assert_eq!(read_excerpts(buf.as_slice()).unwrap(), excerpts);
    }
}

#[test]
fn too_small_corpus_reports_shortfall() {
    let corpus = vec![synthetic_doc("tiny", 20, 0)];
    let err = sample_excerpts(&corpus, SampleParams { n: 50, min_words: 40, max_words: 60, seed: 1 }).unwrap_err();
    assert!(err.to_string().contains("of 50"), "{err}");
}

#[test]
fn ingest_reads_only_txt_files() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("b.txt"), "Second.\n\nMore text here.").unwrap();
    std::fs::write(dir.path().join("a.txt"), "First   line.\r\nNext line.").unwrap();
    std::fs::write(dir.path().join("notes.md"), "ignored").unwrap();
    std::fs::write(dir.path().join("bad.txt"), [0xff, 0xfe, 0x00]).unwrap();
    let ingested = ingest_dir(dir.path()).unwrap();
    let ids: Vec<&str> = ingested.documents.iter().map(|d| d.id.as_str()).collect();
    assert_eq!(ids, ["a", "b"]);
    assert_eq!(ingested.documents[0].text, "First line. Next line.");
    assert_eq!(ingested.skipped.len(), 1);
}
