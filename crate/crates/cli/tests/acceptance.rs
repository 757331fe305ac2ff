//! Acceptance gate: nine end-to-end checks, one per release criterion,
//! each printing a single PASS/FAIL line (run with `--nocapture` to see
//! them). Every quantitative check is made against independently derived
//! values: published result tables typed in by hand, brute-force oracle
//! implementations written from the definitions, or closed-form cases.

use std::collections::BTreeMap;
use std::panic::AssertUnwindSafe;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};
use std::time::{Duration, Instant};

use scorealign::corpus::{Corpus, Document, ScoreScale};
use scorealign::harness::{load_records_csv, make_split, rank_ablation};
use scorealign::lexalign::{divergence_matrix, jsd, FrequencyDistribution, LogBase};
use scorealign::metrics::{qwk, FceScoreTable};
use scorealign::rng::{seeded, uniform_index};
use scorealign::scorer::featurize;
use scorealign::synprof::{profile, profiles_table, read_tree_file, PatternSet};
use tempfile::TempDir;

fn criterion(number: usize, name: &str, check: impl FnOnce()) {
    let result = std::panic::catch_unwind(AssertUnwindSafe(check));
    let status = if result.is_ok() { "PASS" } else { "FAIL" };
    println!("ACCEPTANCE {number} {name}: {status}");
    if let Err(panic) = result {
        std::panic::resume_unwind(panic);
    }
}

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../core/fixtures")
        .join(name)
        .canonicalize()
        .expect("fixture exists")
}

fn run_cli(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_scorealign"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary runs")
}

#[track_caller]
fn expect_success(output: &Output) {
    assert!(
        output.status.success(),
        "command failed\n--- stdout ---\n{}\n--- stderr ---\n{}",
        String::from_utf8_lossy(&output.stdout),
        String::from_utf8_lossy(&output.stderr)
    );
}

/// Parses an advantages.csv artifact into
/// (pair, source, target, shots) -> [RMSE, QWK, Spearman, Pearson].
fn parse_advantages(path: &Path) -> BTreeMap<(String, String, String, usize), [f64; 4]> {
    let text = std::fs::read_to_string(path).expect("advantages artifact exists");
    let mut rows = BTreeMap::new();
    for line in text.lines().skip(1) {
        let cells: Vec<&str> = line.split(',').collect();
        assert_eq!(cells.len(), 10, "unexpected advantage row: {line}");
        let key = (
            cells[0].to_string(),
            cells[3].to_string(),
            cells[4].to_string(),
            cells[5].parse::<usize>().unwrap(),
        );
        let values = [6, 7, 8, 9].map(|i| cells[i].parse::<f64>().unwrap());
        assert!(rows.insert(key, values).is_none(), "duplicate advantage row: {line}");
    }
    rows
}

const TOLERANCE: f64 = 0.001 + 1e-9;

// ---------------------------------------------------------------------------
// 1. Published transfer-advantage table, via the CLI
// ---------------------------------------------------------------------------

/// Hand-typed published advantages for the three (adapted, base) model
/// pairs: (pair, source, target, shots) -> [RMSE, QWK, Spearman, Pearson].
const PUBLISHED_PAIR_ADVANTAGES: [(&str, &str, &str, usize, [f64; 4]); 18] = [
    ("bert", "ielts", "fce", 50, [-0.369, -0.015, -0.013, -0.012]),
    ("bert", "ielts", "fce", 100, [-0.395, -0.058, 0.031, 0.025]),
    ("bert", "ielts", "fce", 200, [-0.270, -0.103, 0.005, -0.012]),
    ("roberta", "ielts", "fce", 50, [-0.169, -0.206, -0.140, -0.153]),
    ("roberta", "ielts", "fce", 100, [0.100, -0.010, 0.039, 0.027]),
    ("roberta", "ielts", "fce", 200, [0.191, -0.096, -0.006, -0.020]),
    ("distilbert", "ielts", "fce", 50, [0.062, 0.031, -0.001, 0.017]),
    ("distilbert", "ielts", "fce", 100, [0.045, 0.048, 0.024, 0.037]),
    ("distilbert", "ielts", "fce", 200, [0.049, 0.057, 0.022, 0.024]),
    ("bert", "fce", "ielts", 50, [-0.066, -0.324, -0.032, -0.043]),
    ("bert", "fce", "ielts", 100, [0.010, -0.082, -0.020, -0.023]),
    ("bert", "fce", "ielts", 200, [-0.025, -0.125, -0.025, -0.040]),
    ("roberta", "fce", "ielts", 50, [0.144, 0.096, 0.023, -0.011]),
    ("roberta", "fce", "ielts", 100, [0.113, -0.054, -0.006, -0.025]),
    ("roberta", "fce", "ielts", 200, [0.012, 0.069, 0.018, 0.005]),
    ("distilbert", "fce", "ielts", 50, [-0.068, -0.083, -0.055, -0.053]),
    ("distilbert", "fce", "ielts", 100, [-0.067, -0.044, -0.037, -0.049]),
    ("distilbert", "fce", "ielts", 200, [-0.053, -0.043, -0.028, -0.033]),
];

#[test]
fn criterion_1_transfer_advantage_reproduction() {
    criterion(1, "transfer advantage table reproduction (72 cells)", || {
        let dir = TempDir::new().unwrap();
        let config = format!(
            "[records]\npath = {:?}\n\n\
             [[pairs]]\nadapted = \"dapt-bert\"\nbase = \"bert\"\n\n\
             [[pairs]]\nadapted = \"dapt-roberta\"\nbase = \"roberta\"\n\n\
             [[pairs]]\nadapted = \"dapt-distilbert\"\nbase = \"distilbert\"\n",
            fixture("table7.csv")
        );
        std::fs::write(dir.path().join("exp.toml"), config).unwrap();

        let started = Instant::now();
        let output = run_cli(dir.path(), &["experiment", "--config", "exp.toml", "--out-dir", "out"]);
        let elapsed = started.elapsed();
        expect_success(&output);
        assert!(elapsed < Duration::from_secs(1), "took {elapsed:?}, budget 1s");

        let rows = parse_advantages(&dir.path().join("out/advantages.csv"));
        assert_eq!(rows.len(), 18, "3 pairs x 2 directions x 3 shot grids");
        let mut cells = 0;
        for (pair, source, target, shots, expected) in PUBLISHED_PAIR_ADVANTAGES {
            let key = (pair.to_string(), source.to_string(), target.to_string(), shots);
            let got = rows.get(&key).unwrap_or_else(|| panic!("missing row {key:?}"));
            for (metric, (g, e)) in got.iter().zip(expected).enumerate() {
                assert!(
                    (g - e).abs() <= TOLERANCE,
                    "{pair} {source}->{target}@{shots} metric {metric}: got {g}, published {e}"
                );
                cells += 1;
            }
        }
        assert_eq!(cells, 72);

        // spot anchors, straight from the published table
        let anchor = |pair: &str, source: &str, target: &str, shots: usize| {
            rows[&(pair.to_string(), source.to_string(), target.to_string(), shots)]
        };
        assert!((anchor("bert", "ielts", "fce", 50)[0] - (-0.369)).abs() <= TOLERANCE);
        assert!((anchor("distilbert", "ielts", "fce", 50)[0] - 0.062).abs() <= TOLERANCE);
        assert!((anchor("distilbert", "ielts", "fce", 50)[1] - 0.031).abs() <= TOLERANCE);
        assert!((anchor("roberta", "fce", "ielts", 50)[0] - 0.144).abs() <= TOLERANCE);
    });
}

// ---------------------------------------------------------------------------
// 2. Published pretraining-subset ablation table, via the CLI
// ---------------------------------------------------------------------------

/// Hand-typed published advantages of each pretraining subset over the
/// no-pretraining baseline.
const PUBLISHED_SUBSET_ADVANTAGES: [(&str, &str, &str, usize, [f64; 4]); 24] = [
    ("full-efcamdat", "ielts", "fce", 50, [-0.369, -0.015, -0.013, -0.012]),
    ("full-efcamdat", "ielts", "fce", 100, [-0.395, -0.058, 0.031, 0.025]),
    ("full-efcamdat", "ielts", "fce", 200, [-0.270, -0.103, 0.005, -0.012]),
    ("a1-a2", "ielts", "fce", 50, [-0.238, -0.105, -0.040, -0.057]),
    ("a1-a2", "ielts", "fce", 100, [-0.276, -0.022, 0.014, 0.017]),
    ("a1-a2", "ielts", "fce", 200, [-0.222, -0.087, -0.011, -0.025]),
    ("b1-b2", "ielts", "fce", 50, [-0.338, -0.072, -0.039, -0.052]),
    ("b1-b2", "ielts", "fce", 100, [-0.387, -0.137, -0.034, -0.046]),
    ("b1-b2", "ielts", "fce", 200, [-0.330, -0.082, 0.023, 0.010]),
    ("b2-c1", "ielts", "fce", 50, [-0.242, -0.008, -0.022, -0.021]),
    ("b2-c1", "ielts", "fce", 100, [-0.409, -0.015, 0.017, 0.024]),
    ("b2-c1", "ielts", "fce", 200, [-0.149, 0.002, 0.050, 0.040]),
    ("full-efcamdat", "fce", "ielts", 50, [-0.066, -0.324, -0.032, -0.043]),
    ("full-efcamdat", "fce", "ielts", 100, [0.010, -0.082, -0.020, -0.023]),
    ("full-efcamdat", "fce", "ielts", 200, [-0.025, -0.125, -0.025, -0.040]),
    ("a1-a2", "fce", "ielts", 50, [-0.052, -0.242, -0.064, -0.065]),
    ("a1-a2", "fce", "ielts", 100, [0.106, 0.015, -0.026, -0.014]),
    ("a1-a2", "fce", "ielts", 200, [0.062, -0.062, -0.068, -0.045]),
    ("b1-b2", "fce", "ielts", 50, [-0.040, -0.313, -0.061, -0.062]),
    ("b1-b2", "fce", "ielts", 100, [0.068, -0.004, -0.008, -0.020]),
    ("b1-b2", "fce", "ielts", 200, [0.073, -0.055, -0.035, -0.032]),
    ("b2-c1", "fce", "ielts", 50, [-0.088, -0.232, 0.000, -0.025]),
    ("b2-c1", "fce", "ielts", 100, [0.051, 0.067, 0.045, 0.034]),
    ("b2-c1", "fce", "ielts", 200, [0.018, 0.039, 0.011, -0.003]),
];

#[test]
fn criterion_2_subset_ablation_reproduction() {
    criterion(2, "pretraining-subset ablation reproduction (96 cells)", || {
        let dir = TempDir::new().unwrap();
        let mut config = format!("[records]\npath = {:?}\n", fixture("table9.csv"));
        for subset in ["full-efcamdat", "a1-a2", "b1-b2", "b2-c1"] {
            config.push_str(&format!(
                "\n[[pairs]]\nadapted = {subset:?}\nbase = \"no-efcamdat\"\nlabel = {subset:?}\n"
            ));
        }
        std::fs::write(dir.path().join("exp.toml"), config).unwrap();

        let started = Instant::now();
        let output = run_cli(dir.path(), &["experiment", "--config", "exp.toml", "--out-dir", "out"]);
        let elapsed = started.elapsed();
        expect_success(&output);
        assert!(elapsed < Duration::from_secs(1), "took {elapsed:?}, budget 1s");

        let rows = parse_advantages(&dir.path().join("out/advantages.csv"));
        assert_eq!(rows.len(), 24, "4 subsets x 2 directions x 3 shot grids");
        let mut cells = 0;
        for (subset, source, target, shots, expected) in PUBLISHED_SUBSET_ADVANTAGES {
            let key = (subset.to_string(), source.to_string(), target.to_string(), shots);
            let got = rows.get(&key).unwrap_or_else(|| panic!("missing row {key:?}"));
            for (metric, (g, e)) in got.iter().zip(expected).enumerate() {
                assert!(
                    (g - e).abs() <= TOLERANCE,
                    "{subset} {source}->{target}@{shots} metric {metric}: got {g}, published {e}"
                );
                cells += 1;
            }
        }
        assert_eq!(cells, 96);

        let a1 = rows[&("a1-a2".into(), "ielts".into(), "fce".into(), 50)];
        assert!((a1[0] - (-0.238)).abs() <= TOLERANCE);
        let b2c1 = rows[&("b2-c1".into(), "fce".into(), "ielts".into(), 100)];
        assert!((b2c1[1] - 0.067).abs() <= TOLERANCE);
    });
}

// ---------------------------------------------------------------------------
// 3. In-domain ablation ranking
// ---------------------------------------------------------------------------

#[test]
fn criterion_3_ablation_ranking() {
    criterion(3, "in-domain ablation ranking order", || {
        let records = load_records_csv(&fixture("table9.csv")).unwrap();
        let fce = rank_ablation(&records, "fce").unwrap();
        assert_eq!(
            fce,
            ["b1-b2", "full-efcamdat", "b2-c1", "a1-a2", "no-efcamdat"],
            "published order on fce"
        );
        let ielts = rank_ablation(&records, "ielts").unwrap();
        assert_eq!(
            ielts,
            ["no-efcamdat", "b2-c1", "a1-a2", "full-efcamdat", "b1-b2"],
            "published order on ielts"
        );
    });
}

// ---------------------------------------------------------------------------
// 4. Divergence property suite with a brute-force oracle
// ---------------------------------------------------------------------------

/// Random token counts over a fresh vocabulary; at least one token.
fn random_counts(rng: &mut scorealign::rng::ChaCha8Rng, vocab: usize) -> BTreeMap<String, u64> {
    let mut counts = BTreeMap::new();
    for t in 0..vocab {
        if uniform_index(rng, 2) == 1 {
            counts.insert(format!("t{t:03}"), 1 + uniform_index(rng, 99) as u64);
        }
    }
    if counts.is_empty() {
        counts.insert("t000".to_string(), 1 + uniform_index(rng, 99) as u64);
    }
    counts
}

/// Independent divergence implementation straight from the definition:
/// mean of the two relative entropies against the midpoint distribution.
fn brute_force_jsd(p: &BTreeMap<String, u64>, q: &BTreeMap<String, u64>, base2: bool) -> f64 {
    let p_total: u64 = p.values().sum();
    let q_total: u64 = q.values().sum();
    let prob = |counts: &BTreeMap<String, u64>, total: u64, token: &str| -> f64 {
        counts.get(token).map_or(0.0, |&c| c as f64 / total as f64)
    };
    let tokens: std::collections::BTreeSet<&String> = p.keys().chain(q.keys()).collect();
    let mut sum = 0.0;
    for token in tokens {
        let pi = prob(p, p_total, token);
        let qi = prob(q, q_total, token);
        let mi = 0.5 * (pi + qi);
        if pi > 0.0 {
            sum += 0.5 * pi * (pi / mi).ln();
        }
        if qi > 0.0 {
            sum += 0.5 * qi * (qi / mi).ln();
        }
    }
    if base2 {
        sum / std::f64::consts::LN_2
    } else {
        sum
    }
}

#[test]
fn criterion_4_divergence_properties() {
    criterion(4, "divergence property suite (1,000 oracle pairs)", || {
        let mut rng = seeded(0x4a5d);
        for round in 0..1_000 {
            let vocab = 2 + uniform_index(&mut rng, 58);
            let a = random_counts(&mut rng, vocab);
            let b = random_counts(&mut rng, vocab);
            let p = FrequencyDistribution::from_counts(&a).unwrap();
            let q = FrequencyDistribution::from_counts(&b).unwrap();

            let natural = jsd(&p, &q, LogBase::Natural).unwrap();
            let bits = jsd(&p, &q, LogBase::Base2).unwrap();
            let oracle_natural = brute_force_jsd(&a, &b, false);
            let oracle_bits = brute_force_jsd(&a, &b, true);
            assert!(
                (natural - oracle_natural).abs() <= 1e-12,
                "round {round}: {natural} vs oracle {oracle_natural}"
            );
            assert!(
                (bits - oracle_bits).abs() <= 1e-12,
                "round {round}: {bits} vs oracle {oracle_bits}"
            );

            let reversed = jsd(&q, &p, LogBase::Natural).unwrap();
            assert!((natural - reversed).abs() <= 1e-12, "round {round}: asymmetry");

            let self_divergence = jsd(&p, &p, LogBase::Natural).unwrap();
            assert!(self_divergence.abs() <= 1e-12, "round {round}: nonzero on identity");

            assert!(natural >= 0.0 && natural <= LogBase::Natural.divergence_ceiling() + 1e-12);
            assert!(bits >= 0.0 && bits <= LogBase::Base2.divergence_ceiling() + 1e-12);
        }

        // disjoint vocabularies attain the ceiling
        let left = BTreeMap::from([("only-left".to_string(), 5u64)]);
        let right = BTreeMap::from([("only-right".to_string(), 3u64)]);
        let p = FrequencyDistribution::from_counts(&left).unwrap();
        let q = FrequencyDistribution::from_counts(&right).unwrap();
        let ceiling = jsd(&p, &q, LogBase::Natural).unwrap();
        assert!((ceiling - std::f64::consts::LN_2).abs() <= 1e-12);

        // report layout: subsets as rows, targets as columns
        let corpus = |name: &str, text: &str| {
            Corpus::new(name, vec![Document::new("d1", text)]).unwrap()
        };
        let subsets = [
            corpus("s1", "one two three"),
            corpus("s2", "two three four"),
            corpus("s3", "three four five"),
        ];
        let targets = [corpus("fce", "one five nine"), corpus("ielts", "two six ten")];
        let matrix = divergence_matrix(&subsets, &targets, false, LogBase::Natural).unwrap();
        let text = matrix.to_text();
        let header = text.lines().next().unwrap();
        assert!(header.starts_with("subset") && header.contains("fce") && header.contains("ielts"));
        assert_eq!(matrix.values.len(), 3, "one row per subset");
        assert_eq!(matrix.values[0].len(), 2, "one column per target");
        assert!(matrix.to_csv().starts_with("subset,fce,ielts\n"));
    });
}

// ---------------------------------------------------------------------------
// 5. Agreement metric vs an explicit double-loop oracle
// ---------------------------------------------------------------------------

/// Independent quadratic-weighted-kappa oracle: explicit observed and
/// expected category matrices, quadratic penalty, no shortcuts.
fn brute_force_qwk(golds: &[f64], preds: &[f64], scale: &ScoreScale) -> f64 {
    let k = scale.categories();
    let n = golds.len() as f64;
    let mut observed = vec![vec![0.0f64; k]; k];
    let mut by_gold = vec![0.0f64; k];
    let mut by_pred = vec![0.0f64; k];
    for (&g, &p) in golds.iter().zip(preds) {
        let i = scale.category_index(g);
        let j = scale.category_index(p);
        observed[i][j] += 1.0;
        by_gold[i] += 1.0;
        by_pred[j] += 1.0;
    }
    let max_distance = ((k - 1) * (k - 1)) as f64;
    let mut numerator = 0.0;
    let mut denominator = 0.0;
    for i in 0..k {
        for j in 0..k {
            let weight = ((i as f64) - (j as f64)).powi(2) / max_distance;
            numerator += weight * observed[i][j];
            denominator += weight * by_gold[i] * by_pred[j] / n;
        }
    }
    1.0 - numerator / denominator
}

fn random_labels(rng: &mut scorealign::rng::ChaCha8Rng, scale: &ScoreScale, n: usize) -> Vec<f64> {
    (0..n)
        .map(|_| scale.value_at(uniform_index(rng, scale.categories())))
        .collect()
}

#[test]
fn criterion_5_agreement_oracle() {
    criterion(5, "agreement metric oracle equivalence (2 x 1,000 labelings)", || {
        let fce = ScoreScale::new(0.0, 20.0, 1.0).unwrap();
        let ielts = ScoreScale::new(0.0, 9.0, 0.5).unwrap();
        let mut rng = seeded(0x9b3c);
        for scale in [&fce, &ielts] {
            for round in 0..1_000 {
                let n = 20 + uniform_index(&mut rng, 181);
                let golds = random_labels(&mut rng, scale, n);
                let preds = random_labels(&mut rng, scale, n);
                let got = qwk(&golds, &preds, scale).unwrap();
                let oracle = brute_force_qwk(&golds, &preds, scale);
                assert!(
                    (got - oracle).abs() <= 1e-12,
                    "round {round}: {got} vs oracle {oracle}"
                );
            }
        }

        // perfect agreement
        let golds: Vec<f64> = (0..=20).map(f64::from).collect();
        let perfect = qwk(&golds, &golds, &fce).unwrap();
        assert!((perfect - 1.0).abs() <= 1e-12, "perfect agreement: {perfect}");

        // perfectly reversed four-category labels
        let four = ScoreScale::new(0.0, 3.0, 1.0).unwrap();
        let up = [0.0, 1.0, 2.0, 3.0];
        let down = [3.0, 2.0, 1.0, 0.0];
        let reversed = qwk(&up, &down, &four).unwrap();
        assert!((reversed + 1.0).abs() <= 1e-12, "reversed labels: {reversed}");

        // independent labels hover near zero
        let golds = random_labels(&mut rng, &ielts, 10_000);
        let preds = random_labels(&mut rng, &ielts, 10_000);
        let independent = qwk(&golds, &preds, &ielts).unwrap();
        assert!(independent.abs() < 0.05, "independent labels: {independent}");
    });
}

// ---------------------------------------------------------------------------
// 6. Hand-annotated counting suite
// ---------------------------------------------------------------------------

/// Hand-derived per-sentence unit counts for the shipped tree suite:
/// id -> [words, clauses, T-units, dependent clauses, complex T-units,
/// coordinate phrases, complex nominals, verb phrases].
const SUITE_COUNTS: [(&str, [u64; 8]); 10] = [
    ("s01", [3, 1, 1, 0, 0, 0, 0, 1]),
    ("s02", [7, 2, 2, 0, 0, 0, 0, 2]),
    ("s03", [5, 2, 1, 1, 1, 0, 1, 2]),
    ("s04", [7, 1, 1, 0, 0, 0, 1, 1]),
    ("s05", [8, 1, 1, 0, 0, 1, 1, 1]),
    ("s06", [5, 1, 1, 0, 0, 0, 0, 1]),
    ("s07", [6, 1, 1, 0, 0, 0, 1, 2]),
    ("s08", [8, 2, 1, 1, 1, 0, 1, 2]),
    ("s09", [12, 2, 1, 1, 1, 0, 1, 2]),
    ("s10", [12, 2, 2, 0, 0, 1, 0, 3]),
];

#[test]
fn criterion_6_counting_suite() {
    criterion(6, "hand-annotated counting suite (10 sentences, exact)", || {
        let bank = read_tree_file(&fixture("suite.trees")).unwrap();
        let patterns = PatternSet::default_set();

        let mut pooled = scorealign::synprof::UnitCounts::default();
        for (id, expected) in SUITE_COUNTS {
            let trees = bank.get(id).unwrap_or_else(|| panic!("suite lacks {id}"));
            let counts = patterns.count_units(trees);
            let got = [
                counts.words,
                counts.clauses,
                counts.t_units,
                counts.dependent_clauses,
                counts.complex_t_units,
                counts.coordinate_phrases,
                counts.complex_nominals,
                counts.verb_phrases,
            ];
            assert_eq!(got, expected, "{id}: [words, C, T, DC, CT, CP, CN, VP]");
            assert_eq!(counts.sentences, 1, "{id} is a single sentence");
            pooled += counts;
        }

        assert_eq!(
            [pooled.words, pooled.clauses, pooled.t_units, pooled.dependent_clauses],
            [73, 15, 12, 3]
        );
        assert_eq!(
            [pooled.complex_t_units, pooled.coordinate_phrases, pooled.complex_nominals],
            [3, 2, 6]
        );

        let indices = profile(&pooled);
        let expected = [
            73.0 / 12.0, // mean length of T-unit
            73.0 / 15.0, // mean length of clause
            15.0 / 12.0, // clauses per T-unit
            3.0 / 15.0,  // dependent-clause ratio
            3.0 / 12.0,  // complex T-unit ratio
            2.0 / 12.0,  // coordinate phrases per T-unit
            6.0 / 12.0,  // complex nominals per T-unit
        ];
        for ((got, want), name) in indices.values().iter().zip(expected).zip(
            ["MLT", "MLC", "C/T", "DC/C", "CT/T", "CP/T", "CN/T"],
        ) {
            assert_eq!(*got, want, "{name} must match the hand computation exactly");
        }
        assert!(indices.zero_denominators.is_empty());

        // report layout: one labeled row with all seven indices
        let docs = SUITE_COUNTS
            .iter()
            .map(|(id, _)| Document::new(*id, "placeholder"))
            .collect();
        let corpus = Corpus::new("suite", docs).unwrap();
        let row = scorealign::synprof::profile_corpus(
            &corpus,
            &bank,
            patterns,
            scorealign::synprof::Aggregation::Pooled,
        )
        .unwrap();
        let table = profiles_table(std::slice::from_ref(&row), patterns.checksum());
        for name in ["MLT", "MLC", "C/T", "DC/C", "CT/T", "CP/T", "CN/T"] {
            assert!(table.contains(name), "profile table lacks {name}");
        }
    });
}

// ---------------------------------------------------------------------------
// 7. Split contract over 100 seeds
// ---------------------------------------------------------------------------

#[test]
fn criterion_7_split_contract() {
    criterion(7, "grouped split contract (100 seeds, 1,000 docs, 300 authors)", || {
        let documents: Vec<Document> = (0..1_000)
            .map(|i| {
                let mut doc = Document::new(format!("d{i:04}"), "placeholder text");
                doc.author_id = Some(format!("a{:03}", i % 300));
                doc
            })
            .collect();
        let corpus = Corpus::new("synthetic", documents).unwrap();
        // authors 0..99 wrote 4 documents, authors 100..299 wrote 3
        let max_group = 4i64;
        let targets = [700.0, 150.0, 150.0];

        for seed in 0..100 {
            let spec = make_split(&corpus, seed, true).unwrap();
            spec.validate_against(&corpus).unwrap();

            let mut part_of: BTreeMap<&str, usize> = BTreeMap::new();
            for (index, part) in [&spec.train, &spec.dev, &spec.test].into_iter().enumerate() {
                for id in part {
                    assert!(part_of.insert(id, index).is_none(), "{id} in two parts");
                }
            }
            assert_eq!(part_of.len(), 1_000, "every document lands in exactly one part");

            let mut author_part: BTreeMap<&str, usize> = BTreeMap::new();
            for doc in &corpus.documents {
                let part = part_of[doc.id.as_str()];
                let author = doc.author_id.as_deref().unwrap();
                if let Some(&first) = author_part.get(author) {
                    assert_eq!(first, part, "seed {seed}: author {author} straddles parts");
                } else {
                    author_part.insert(author, part);
                }
            }

            for (part, target) in [&spec.train, &spec.dev, &spec.test].into_iter().zip(targets) {
                let offset = part.len() as i64 - target as i64;
                assert!(
                    offset.abs() <= max_group,
                    "seed {seed}: part size {} misses target {target} by more than one group",
                    part.len()
                );
            }

            let again = make_split(&corpus, seed, true).unwrap();
            assert_eq!(spec.to_json(), again.to_json(), "seed {seed}: JSON not byte-identical");
        }
    });
}

// ---------------------------------------------------------------------------
// 8. End-to-end pipeline sanity on a synthetic scored corpus
// ---------------------------------------------------------------------------

const STOPS: [&str; 10] = ["the", "and", "of", "to", "in", "a", "was", "it", "for", "with"];
const SHORT_WORDS: [&str; 12] = [
    "lake", "city", "race", "book", "tree", "road", "song", "door", "fish", "moon", "rain", "seed",
];
const LONG_WORDS: [&str; 8] = [
    "extraordinary",
    "magnificent",
    "considerable",
    "atmosphere",
    "fundamental",
    "possibility",
    "environment",
    "temperature",
];

/// A document whose lexical features are spread widely: length, vocabulary
/// size, word length, and stopword share all vary with the draws.
fn synthetic_text(rng: &mut scorealign::rng::ChaCha8Rng) -> String {
    let tokens = 40 + uniform_index(rng, 121);
    let stop_percent = 15 + uniform_index(rng, 41);
    let long_percent = 10 + uniform_index(rng, 51);
    let pool = 3 + uniform_index(rng, 9);
    let mut words = Vec::with_capacity(tokens);
    for _ in 0..tokens {
        let roll = uniform_index(rng, 100);
        if roll < stop_percent {
            words.push(STOPS[uniform_index(rng, STOPS.len())]);
        } else if roll < stop_percent + long_percent {
            words.push(LONG_WORDS[uniform_index(rng, LONG_WORDS.len())]);
        } else {
            words.push(SHORT_WORDS[uniform_index(rng, pool.min(SHORT_WORDS.len()))]);
        }
    }
    words.join(" ")
}

/// Standard normal draw via Box-Muller on the shared generator.
fn normal(rng: &mut scorealign::rng::ChaCha8Rng) -> f64 {
    let grain = 1u64 << 20;
    let u1 = (uniform_index(rng, grain as usize) as f64 + 1.0) / grain as f64;
    let u2 = uniform_index(rng, grain as usize) as f64 / grain as f64;
    (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
}

#[test]
fn criterion_8_end_to_end_pipeline() {
    criterion(8, "end-to-end pipeline sanity (600 synthetic documents)", || {
        let started = Instant::now();
        let mut rng = seeded(0x600d);
        let texts: Vec<String> = (0..600).map(|_| synthetic_text(&mut rng)).collect();

        // normalized target: an affine function of the lexical features
        let raw: Vec<f64> = texts
            .iter()
            .map(|text| {
                let f = featurize(text, None).values;
                f[0] / 150.0 + 0.8 * f[1] + 0.15 * f[2] + 0.9 * f[3]
            })
            .collect();
        let lowest = raw.iter().cloned().fold(f64::INFINITY, f64::min);
        let highest = raw.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let golds: Vec<f64> = raw
            .iter()
            .map(|y| {
                let spread = 0.03 + 0.94 * (y - lowest) / (highest - lowest);
                (spread + 0.02 * normal(&mut rng)).clamp(0.0, 1.0)
            })
            .collect();

        let alpha_scale = ScoreScale::new(0.0, 20.0, 1.0).unwrap();
        let beta_scale = ScoreScale::new(0.0, 9.0, 0.5).unwrap();
        let dir = TempDir::new().unwrap();
        for (name, scale, range) in
            [("alpha", &alpha_scale, 0..300usize), ("beta", &beta_scale, 300..600)]
        {
            let mut lines = String::new();
            for i in range {
                let score = scale.denormalize(golds[i]);
                lines.push_str(&format!(
                    "{{\"id\":\"{name}{i:03}\",\"text\":{},\"score\":{score}}}\n",
                    serde_json::to_string(&texts[i]).unwrap()
                ));
            }
            std::fs::write(dir.path().join(format!("{name}.jsonl")), lines).unwrap();
        }

        let config = r#"
[datasets.alpha]
path = "alpha.jsonl"
scale = { min = 0.0, max = 20.0, step = 1.0 }

[datasets.beta]
path = "beta.jsonl"
scale = { min = 0.0, max = 9.0, step = 0.5 }

[[models]]
name = "ridge"
kind = "internal"

[[models]]
name = "ridge-stiff"
kind = "internal"
lambda = 25.0

[[pairs]]
adapted = "ridge"
base = "ridge-stiff"
label = "prior-strength"
"#;
        std::fs::write(dir.path().join("exp.toml"), config).unwrap();
        let output = run_cli(dir.path(), &["experiment", "--config", "exp.toml", "--out-dir", "out"]);
        expect_success(&output);

        let records = std::fs::read_to_string(dir.path().join("out/records.csv")).unwrap();
        let rows: Vec<Vec<&str>> = records.lines().skip(1).map(|l| l.split(',').collect()).collect();

        for dataset in ["alpha", "beta"] {
            let row = rows
                .iter()
                .find(|r| r[0] == "ridge" && r[3] == "in_domain" && r[2] == dataset)
                .unwrap_or_else(|| panic!("no in-domain run on {dataset}"));
            let pearson: f64 = row[8].parse().unwrap();
            assert!(pearson > 0.95, "in-domain Pearson on {dataset}: {pearson}");
        }

        for (source, target) in [("alpha", "beta"), ("beta", "alpha")] {
            for shots in ["50", "100", "200"] {
                let row = rows.iter().find(|r| {
                    r[0] == "ridge"
                        && r[3] == "transfer"
                        && r[1] == source
                        && r[2] == target
                        && r[4] == shots
                });
                let row = row.unwrap_or_else(|| panic!("missing {source}->{target}@{shots}"));
                assert!(!row[5].is_empty(), "transfer run lacks an error value");
            }
        }

        let advantages = std::fs::read_to_string(dir.path().join("out/advantages.csv")).unwrap();
        assert_eq!(
            advantages.lines().count(),
            7,
            "header + 2 directions x 3 shot grids:\n{advantages}"
        );

        let elapsed = started.elapsed();
        assert!(elapsed < Duration::from_secs(30), "took {elapsed:?}, budget 30s");
    });
}

// ---------------------------------------------------------------------------
// 9. Score-scale round-trips and the band conversion table
// ---------------------------------------------------------------------------

#[test]
fn criterion_9_scale_round_trips() {
    criterion(9, "scale round-trips and conversion-table monotonicity", || {
        let fce = ScoreScale::new(0.0, 20.0, 1.0).unwrap();
        assert_eq!(fce.categories(), 21);
        for value in fce.values() {
            assert_eq!(fce.denormalize(fce.normalize(value)), value, "fce {value}");
        }

        let ielts = ScoreScale::new(0.0, 9.0, 0.5).unwrap();
        assert_eq!(ielts.categories(), 19);
        for value in ielts.values() {
            assert_eq!(ielts.denormalize(ielts.normalize(value)), value, "ielts {value}");
        }

        let table = FceScoreTable::default_table();
        let rows: Vec<(u32, u32, f64)> = table.rows().collect();
        assert!(!rows.is_empty());
        assert_eq!(rows.first().unwrap().2, 0.0, "lowest band maps to 0");
        assert_eq!(rows.last().unwrap().2, 20.0, "highest band maps to 20");
        for pair in rows.windows(2) {
            assert!(
                pair[1].2 > pair[0].2,
                "conversion not strictly monotone at band {} mark {}",
                pair[1].0,
                pair[1].1
            );
        }
        for &(band, mark, score) in &rows {
            let raw = band as f64 + mark as f64 / 10.0;
            assert_eq!(table.convert(raw).unwrap(), score, "band {band} mark {mark}");
        }
    });
}
