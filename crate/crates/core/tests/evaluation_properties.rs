use std::collections::BTreeMap;

use hazelkit::evaluation::{
    aggregate_rubric, compare, render_report, summarize, AggregateStats, Chatbot, Direction, LabeledAggregate,
    ReportFormat, ReportInput, RubricCategory, RubricScore, SampleSet,
};
use hazelkit::readability::Formula;
use hazelkit::rng::SeededRng;
use proptest::prelude::*;

fn brute_median(v: &[f64]) -> f64 {
    let mut s = v.to_vec();
    s.sort_by(f64::total_cmp);
    let n = s.len();
    if n % 2 == 1 {
        s[n / 2]
    } else {
        (s[n / 2 - 1] + s[n / 2]) / 2.0
    }
}

fn brute_sd(v: &[f64]) -> Option<f64> {
    if v.len() < 2 {
        return None;
    }
    let mean = v.iter().sum::<f64>() / v.len() as f64;
    let ss: f64 = v.iter().map(|x| (x - mean) * (x - mean)).sum();
    Some((ss / (v.len() - 1) as f64).sqrt())
}

#[test]
fn summaries_match_brute_force_on_random_vectors() {
    let mut rng = SeededRng::new(2024);
    for _ in 0..1000 {
        let n = 1 + rng.below(60);
        let v: Vec<f64> = (0..n).map(|_| rng.below(1_000_000) as f64 / 1000.0 - 300.0).collect();
        let s = summarize(&v).unwrap();
        let mean = v.iter().sum::<f64>() / n as f64;
        assert!((s.mean - mean).abs() < 1e-9);
        assert!((s.median - brute_median(&v)).abs() < 1e-9);
        match (s.sd, brute_sd(&v)) {
            (Some(a), Some(b)) => assert!((a - b).abs() < 1e-9),
            (None, None) => assert_eq!(n, 1),
            other => panic!("{other:?}"),
        }
    }
}

fn rubric_row(i: usize, bot: Chatbot, v: [u8; 5]) -> RubricScore {
    RubricScore {
        sample_id: format!("s{i}"),
        rater_id: "r1".into(),
        chatbot: bot,
        style_tone: v[0],
        clarity: v[1],
        readability_accessibility: v[2],
        diversity_inclusion: v[3],
        overall_suitability: v[4],
    }
}

fn rubric_rows() -> impl Strategy<Value = Vec<RubricScore>> {
    prop::collection::vec((any::<bool>(), prop::array::uniform5(1u8..=5)), 1..40).prop_map(|rows| {
        rows.into_iter()
            .enumerate()
            .map(|(i, (h, v))| rubric_row(i, if h { Chatbot::Hazel } else { Chatbot::ChatGpt }, v))
            .collect()
    })
}

fn aggregate_of(values: &[Vec<f64>]) -> AggregateStats {
    AggregateStats::from_columns(Formula::ALL.iter().zip(values).map(|(&f, v)| (f, v.clone())).collect()).unwrap()
}

proptest! {
    #[test]
    fn rubric_aggregation_ignores_row_order(rows in rubric_rows(), seed in any::<u64>()) {
        let mut shuffled = rows.clone();
        SeededRng::new(seed).shuffle(&mut shuffled);
        let a = aggregate_rubric(&rows).unwrap();
        let b = aggregate_rubric(&shuffled).unwrap();
        for (bot, cats) in &a.chatbots {
            for (cat, s) in cats {
                let t = &b.chatbots[bot][cat];
                prop_assert!((s.mean - t.mean).abs() < 1e-9);
                prop_assert_eq!(s.median, t.median);
                prop_assert!((s.sd.unwrap_or(0.0) - t.sd.unwrap_or(0.0)).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn comparing_a_set_with_itself_is_all_zero(cols in prop::collection::vec(prop::collection::vec(-50.0f64..150.0, 1..20), 4)) {
        let a = aggregate_of(&cols);
        for d in compare(&a, &a).unwrap().deltas {
            prop_assert_eq!(d.mean_delta, 0.0);
            prop_assert_eq!(d.direction, Direction::Unchanged);
        }
    }

    #[test]
    fn csv_report_reparses_to_two_decimals(
        cols in prop::collection::vec(prop::collection::vec(-50.0f64..150.0, 2..20), 4),
        rows in rubric_rows(),
    ) {
        let stats = aggregate_of(&cols);
        let rubric = aggregate_rubric(&rows).unwrap();
        let input = ReportInput {
            sets: vec![LabeledAggregate { label: "Corpus".into(), source_set: SampleSet::Corpus, stats: stats.clone() }],
            comparisons: vec![],
            rubric: Some(rubric.clone()),
        };
        let csv = render_report(&input, ReportFormat::Csv).unwrap();
        let mut parsed: BTreeMap<(String, String, String, String), f64> = BTreeMap::new();
        let mut reader = csv::Reader::from_reader(csv.as_bytes());
        for rec in reader.records() {
            let rec = rec.unwrap();
            let key = (rec[0].to_string(), rec[1].to_string(), rec[2].to_string(), rec[3].to_string());
            // Absent statistics (sd of a single row) are written as empty cells.
            if !rec[4].is_empty() {
                parsed.insert(key, rec[4].parse().unwrap());
            }
        }
        let close = |a: f64, b: f64| (a - b).abs() <= 0.005 + 1e-9;
        for (f, s) in &stats.formulas {
            let get = |stat: &str| parsed[&("readability".into(), "Corpus".into(), stat.into(), f.label().into())];
            prop_assert!(close(get("mean"), s.mean));
            prop_assert!(close(get("median"), s.median));
            prop_assert!(close(get("sd"), s.sd.unwrap()));
        }
        for (bot, cats) in &rubric.chatbots {
            for c in RubricCategory::ALL {
                let key = ("rubric".to_string(), format!("{bot}-produced"), "mean".to_string(), c.label().to_string());
                prop_assert!(close(parsed[&key], cats[&c].mean));
            }
        }
    }
}
