//! Acceptance suite: one test per shipped guarantee, each printing a
//! pass line. Run with `cargo test --test acceptance -- --nocapture` to
//! see the lines.

use std::collections::{BTreeMap, BTreeSet};
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use lexchoice::corpus::synth::{synth_corpus, SynthSpec};
use lexchoice::corpus::{AbbrevSet, Corpus, Document};
use lexchoice::evaluator::{evaluate, learning_curve, pr, split_by_entity};
use lexchoice::extractor::{EDTuple, Extractor, Gazetteer};
use lexchoice::indicators::{make_records, FeatureRecord, WordBag, DEFAULT_WINDOW};
use lexchoice::learner::{predict, train, train_noise_free, ConditionTest, LearnerParams};
use lexchoice::profiles::{build_profiles, ddpe_histogram, mean_ddpe, sample_profile_descriptions};
use lexchoice::taxonomy::{SynsetId, TagMode, Taxonomy};

fn id(s: &str) -> SynsetId {
    s.parse().unwrap()
}

fn ids(strs: &[&str]) -> BTreeSet<SynsetId> {
    strs.iter().map(|s| id(s)).collect()
}

#[test]
fn a01_precision_recall_worked_example() {
    let (p, r) = pr(
        &ids(&["00000001", "00000002", "00000003"]),
        &ids(&["00000002", "00000004"]),
    );
    assert_eq!(p, 1.0 / 3.0);
    assert_eq!(r, 1.0 / 2.0);
    println!("acceptance 1: pass — pr on {{A,B,C}} vs {{B,D}} is exactly (1/3, 1/2)");
}

#[test]
fn a02_hypernym_chain_of_director() {
    let taxonomy = Taxonomy::builtin();
    let chain = taxonomy.hypernym_chain(id("07063762")).unwrap();
    let expected: Vec<SynsetId> = [
        "07063762", "07063507", "07311393", "06950891", "00004123", "00002086", "00001740",
    ]
    .iter()
    .map(|s| id(s))
    .collect();
    assert_eq!(chain, expected);
    println!("acceptance 2: pass — director chain has the 7 nodes in order");
}

#[test]
fn a03_extraction_golden_sentence() {
    let doc = Document::new(
        "a1",
        "Chief U.N. arms inspector Richard Butler met Iraq's Deputy Prime Minister \
         Tareq Aziz Monday after rejecting Iraqi attempts to set deadlines for \
         finishing his work.",
        &AbbrevSet::default(),
    );
    let extractor =
        Extractor::default().with_gazetteer(Gazetteer::new(["Richard Butler", "Tareq Aziz"]));
    let tuples = extractor.extract_pairs(&doc);
    let expected = vec![
        EDTuple {
            entity: "Richard Butler".into(),
            description: ["chief", "u.n.", "arms", "inspector"]
                .map(str::to_string)
                .to_vec(),
            article_id: "a1".into(),
            sentence_no: 0,
        },
        EDTuple {
            entity: "Tareq Aziz".into(),
            description: ["iraq's", "deputy", "prime", "minister"]
                .map(str::to_string)
                .to_vec(),
            article_id: "a1".into(),
            sentence_no: 0,
        },
    ];
    assert_eq!(tuples, expected);
    println!("acceptance 3: pass — golden sentence yields exactly the two tuples");
}

#[test]
fn a04_chooser_selects_cambodian_foreign_minister() {
    let tuples: Vec<EDTuple> = sample_profile_descriptions()
        .into_iter()
        .map(|description| EDTuple {
            entity: "Ung Huot".into(),
            description,
            article_id: "a".into(),
            sentence_no: 0,
        })
        .collect();
    let profiles = build_profiles(&tuples, &Taxonomy::builtin(), TagMode::WordParent);
    let constraints = ids(&["08500000", "09500000"]); // country, political post
    let chosen =
        lexchoice::chooser::choose_description(&profiles["Ung Huot"], &constraints).unwrap();
    assert_eq!(chosen.description.join(" "), "cambodian foreign minister");
    println!("acceptance 4: pass — country+post constraints pick \"cambodian foreign minister\"");
}

/// Consistent random records: one trigger word per record fully
/// determines the label set; fillers, entities, and lengths vary freely.
fn consistent_records(seed: u64, n: usize) -> Vec<FeatureRecord> {
    let classes: [(&str, &[&str]); 6] = [
        ("inflation", &["30000001"]),
        ("strike", &["30000002", "30000003"]),
        ("election", &["30000004"]),
        ("storm", &["30000005", "30000001"]),
        ("cinema", &["30000006"]),
        ("harvest", &["30000007", "30000008", "30000009"]),
    ];
    let fillers = [
        "market", "report", "weather", "traffic", "harbor", "museum", "garden", "bridge",
        "festival", "journal", "quarter", "station",
    ];
    let entities = ["Alan Reed", "Bora Keller", "Cara Voss"];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| {
            let (trigger, atoms) = classes[rng.random_range(0..classes.len())];
            let mut context: WordBag = [trigger].into_iter().collect();
            for _ in 0..rng.random_range(2..6) {
                context.insert(fillers[rng.random_range(0..fillers.len())]);
            }
            FeatureRecord {
                context,
                article_length: rng.random_range(50..500),
                entity_name: entities[rng.random_range(0..entities.len())].into(),
                profile_bag: ["premier", "banker"].into_iter().collect(),
                profile_offsets: BTreeSet::new(),
                label: atoms.iter().map(|s| id(s)).collect(),
            }
        })
        .collect()
}

#[test]
fn a05_noise_free_mode_is_perfect_and_mutually_exclusive() {
    for seed in 1..=5u64 {
        let n = 100 + (seed as usize - 1) * 225; // 100..=1000
        let records = consistent_records(seed, n);
        let started = Instant::now();
        let rs = train_noise_free(&records, &LearnerParams::default()).unwrap();
        let report = evaluate(&rs, &records);
        assert_eq!(report.mean_precision, 1.0, "seed {seed}");
        assert_eq!(report.mean_recall, 1.0, "seed {seed}");
        let mut total_covered = 0usize;
        for r in &records {
            let firing = rs.rules.iter().filter(|rule| rule.fires(r)).count();
            assert!(firing <= 1, "seed {seed}: {firing} rules fire on one record");
            total_covered += firing;
        }
        let predicted_nonempty = records
            .iter()
            .filter(|r| !predict(&rs, r).is_empty())
            .count();
        assert_eq!(total_covered, predicted_nonempty, "seed {seed}");
        let elapsed = started.elapsed();
        assert!(
            elapsed.as_secs_f64() < 10.0,
            "seed {seed} took {elapsed:?}, budget is 10s"
        );
    }
    println!("acceptance 5: pass — noise-free training is 100/100 with disjoint coverage on 5 seeds");
}

fn recovery_spec() -> SynthSpec {
    toml::from_str(
        r#"
        n_documents = 1100
        entities = ["Alan Reed", "Bora Keller", "Cara Voss"]
        distractor_vocab = [
            "market", "report", "weather", "traffic", "harbor", "museum", "garden",
            "bridge", "festival", "journal", "quarter", "station", "border", "cargo",
            "engine", "forest", "granite", "hillside", "island", "jungle", "kitchen",
            "ladder", "meadow", "notebook", "orchard", "pasture", "quarry", "river",
            "saddle", "timber",
        ]
        triggers = ["inflation", "strike", "election", "storm", "cinema"]

        [tags]
        banker = { offset = "21000001", parent = "21000100" }
        senator = { offset = "21000002", parent = "21000200" }
        organizer = { offset = "21000003", parent = "21000300" }
        farmer = { offset = "21000004", parent = "21000400" }
        actor = { offset = "21000005", parent = "21000500" }

        [[descriptions]]
        name = "banker"
        words = ["banker"]

        [[descriptions]]
        name = "senator"
        words = ["senator"]

        [[descriptions]]
        name = "organizer"
        words = ["organizer"]

        [[descriptions]]
        name = "farmer"
        words = ["farmer"]

        [[descriptions]]
        name = "actor"
        words = ["actor"]

        [[rules]]
        trigger = "inflation"
        descriptions = ["banker"]

        [[rules]]
        trigger = "strike"
        descriptions = ["senator"]

        [[rules]]
        trigger = "election"
        descriptions = ["organizer"]

        [[rules]]
        trigger = "storm"
        descriptions = ["farmer"]

        [[rules]]
        trigger = "cinema"
        descriptions = ["actor"]
        "#,
    )
    .unwrap()
}

/// synth -> extract -> profiles -> records, at one tag mode.
fn pipeline_records(spec: &SynthSpec, seed: u64, mode: TagMode) -> (Corpus, Vec<FeatureRecord>) {
    let (corpus, _) = synth_corpus(spec, seed).unwrap();
    let taxonomy = spec.taxonomy().unwrap();
    let tuples = Extractor::default().extract_corpus(&corpus);
    let profiles = build_profiles(&tuples, &taxonomy, mode);
    let records =
        make_records(&tuples, &corpus, &profiles, &taxonomy, mode, DEFAULT_WINDOW).unwrap();
    (corpus, records)
}

#[test]
fn a06_planted_rules_are_recovered() {
    let started = Instant::now();
    let spec = recovery_spec();
    let (_, records) = pipeline_records(&spec, 7, TagMode::WordOnly);
    assert!(records.len() >= 2000, "only {} records", records.len());
    // hold one of the three entities out
    let (train_split, test_split) = split_by_entity(&records, 2.0 / 3.0, 7).unwrap();
    assert!(!test_split.is_empty());
    let rs = train(&train_split, &LearnerParams::default()).unwrap();
    let report = evaluate(&rs, &test_split);
    assert!(
        report.mean_precision >= 0.95,
        "test precision {}",
        report.mean_precision
    );
    assert!(
        report.mean_recall >= 0.90,
        "test recall {}",
        report.mean_recall
    );
    let learned_context_words: BTreeSet<&str> = rs
        .rules
        .iter()
        .flat_map(|r| r.conditions.iter())
        .filter_map(|c| match c {
            ConditionTest::ContextContains(w) => Some(w.as_str()),
            _ => None,
        })
        .collect();
    for trigger in ["inflation", "strike", "election", "storm", "cinema"] {
        assert!(
            learned_context_words.contains(trigger),
            "planted trigger {trigger} not among learned conditions"
        );
    }
    let elapsed = started.elapsed();
    assert!(elapsed.as_secs_f64() < 60.0, "took {elapsed:?}, budget 60s");
    println!(
        "acceptance 6: pass — P={:.3} R={:.3} on held-out entity, all 5 triggers learned",
        report.mean_precision, report.mean_recall
    );
}

fn curve_spec() -> SynthSpec {
    toml::from_str(
        r#"
        n_documents = 1600
        entities = [
            "Alan Reed", "Bora Keller", "Cara Voss", "Dana Frost", "Egon Marsh",
            "Faye Ingram", "Gil Norton", "Hana Quist", "Ivan Lowe", "Jade Perez",
        ]
        distractor_vocab = [
            "market", "report", "weather", "traffic", "harbor", "museum", "garden",
            "bridge", "festival", "journal", "quarter", "station", "border", "cargo",
            "engine", "forest", "granite", "hillside", "island", "jungle", "kitchen",
            "ladder", "meadow", "notebook", "orchard", "pasture", "quarry", "river",
            "saddle", "timber",
        ]
        triggers = [
            "inflation", "strike", "election", "storm", "cinema", "harvest",
            "lawsuit", "merger", "rescue", "scandal", "tournament", "voyage",
        ]

        # description triples share a parent; the regularity only
        # becomes visible to the learner through parent tags
        [tags]
        premier = { offset = "22000001", parent = "22100001" }
        statesman = { offset = "22000002", parent = "22100001" }
        chancellor = { offset = "22000003", parent = "22100001" }
        guard = { offset = "22000004", parent = "22100002" }
        warden = { offset = "22000005", parent = "22100002" }
        sentry = { offset = "22000006", parent = "22100002" }
        broker = { offset = "22000007", parent = "22100003" }
        trader = { offset = "22000008", parent = "22100003" }
        dealer = { offset = "22000009", parent = "22100003" }
        pilot = { offset = "22000021", parent = "22100004" }
        aviator = { offset = "22000022", parent = "22100004" }
        copilot = { offset = "22000023", parent = "22100004" }
        banker = { offset = "22000011", parent = "22100011" }
        senator = { offset = "22000012", parent = "22100012" }
        organizer = { offset = "22000013", parent = "22100013" }
        farmer = { offset = "22000014", parent = "22100014" }

        [[descriptions]]
        name = "premier"
        words = ["premier"]

        [[descriptions]]
        name = "statesman"
        words = ["statesman"]

        [[descriptions]]
        name = "chancellor"
        words = ["chancellor"]

        [[descriptions]]
        name = "guard"
        words = ["guard"]

        [[descriptions]]
        name = "warden"
        words = ["warden"]

        [[descriptions]]
        name = "sentry"
        words = ["sentry"]

        [[descriptions]]
        name = "broker"
        words = ["broker"]

        [[descriptions]]
        name = "trader"
        words = ["trader"]

        [[descriptions]]
        name = "dealer"
        words = ["dealer"]

        [[descriptions]]
        name = "pilot"
        words = ["pilot"]

        [[descriptions]]
        name = "aviator"
        words = ["aviator"]

        [[descriptions]]
        name = "copilot"
        words = ["copilot"]

        [[descriptions]]
        name = "banker"
        words = ["banker"]

        [[descriptions]]
        name = "senator"
        words = ["senator"]

        [[descriptions]]
        name = "organizer"
        words = ["organizer"]

        [[descriptions]]
        name = "farmer"
        words = ["farmer"]

        [[rules]]
        trigger = "inflation"
        descriptions = ["premier", "statesman", "chancellor"]

        [[rules]]
        trigger = "strike"
        descriptions = ["guard", "warden", "sentry"]

        [[rules]]
        trigger = "election"
        descriptions = ["broker", "trader", "dealer"]

        [[rules]]
        trigger = "storm"
        descriptions = ["pilot", "aviator", "copilot"]

        [[rules]]
        trigger = "cinema"
        descriptions = ["banker"]

        [[rules]]
        trigger = "harvest"
        descriptions = ["senator"]

        [[rules]]
        trigger = "lawsuit"
        descriptions = ["organizer"]

        [[rules]]
        trigger = "merger"
        descriptions = ["farmer"]

        [[rules]]
        trigger = "rescue"
        descriptions = ["premier"]
        weight = 0.05

        [[rules]]
        trigger = "scandal"
        descriptions = ["guard"]
        weight = 0.05

        [[rules]]
        trigger = "tournament"
        descriptions = ["broker"]
        weight = 0.05

        [[rules]]
        trigger = "voyage"
        descriptions = ["banker"]
        weight = 0.05
        "#,
    )
    .unwrap()
}

#[test]
fn a07_learning_curve_trend() {
    let spec = curve_spec();
    let (_, records_wo) = pipeline_records(&spec, 11, TagMode::WordOnly);
    let (_, records_wp) = pipeline_records(&spec, 11, TagMode::WordParent);
    let by_mode = vec![
        (TagMode::WordOnly, records_wo),
        (TagMode::WordParent, records_wp),
    ];
    let sizes = [100usize, 2000];
    let rows = learning_curve(&by_mode, &sizes, &LearnerParams::default(), 0.9, 11).unwrap();
    let recall = |size: usize, mode: TagMode| {
        rows.iter()
            .find(|r| r.size == size && r.mode == mode)
            .unwrap()
            .recall
    };
    for mode in TagMode::ALL {
        assert!(
            recall(2000, mode) > recall(100, mode),
            "{mode}: recall {} at 2000 vs {} at 100",
            recall(2000, mode),
            recall(100, mode)
        );
    }
    for &size in &sizes {
        assert!(
            recall(size, TagMode::WordParent) >= recall(size, TagMode::WordOnly),
            "size {size}: parent recall {} under word recall {}",
            recall(size, TagMode::WordParent),
            recall(size, TagMode::WordOnly)
        );
    }
    println!("acceptance 7: pass — recall grows with size and parent mode dominates:");
    for row in &rows {
        println!(
            "  size {}\tmode {}\tP {:.4}\tR {:.4}",
            row.size, row.mode, row.precision, row.recall
        );
    }
}

#[test]
fn a08_oracle_equivalence_on_small_instances() {
    let started = Instant::now();
    let words = ["w1", "w2", "w3"];
    let atoms = [id("00000001"), id("00000002")];
    // the 8 possible condition-value vectors over 3 context-word tests
    let base_contexts: Vec<WordBag> = (0u32..8)
        .map(|mask| {
            words
                .iter()
                .enumerate()
                .filter(|(i, _)| mask & (1 << i) != 0)
                .map(|(_, w)| *w)
                .collect()
        })
        .collect();
    let base_record = |vec_idx: usize| FeatureRecord {
        context: base_contexts[vec_idx].clone(),
        article_length: 100,
        entity_name: "E".to_string(),
        profile_bag: WordBag::default(),
        profile_offsets: BTreeSet::new(),
        label: BTreeSet::new(),
    };
    let label_options: [BTreeSet<SynsetId>; 4] = [
        BTreeSet::new(),
        BTreeSet::from([atoms[0]]),
        BTreeSet::from([atoms[1]]),
        BTreeSet::from([atoms[0], atoms[1]]),
    ];
    let params = LearnerParams {
        min_support: 1,
        ..LearnerParams::default()
    };

    // per condition, the bitmask of vectors it holds on; plus "always"
    let cond_masks: [u8; 4] = [0b1111_1111, 0b1010_1010, 0b1100_1100, 0b1111_0000];
    // mask bit v set <=> condition holds on vector v; w_i holds where v has bit i
    let holds = |cand: usize, vec_idx: usize| cond_masks[cand] & (1 << vec_idx) != 0;
    for (i, m) in cond_masks.iter().enumerate().skip(1) {
        for v in 0..8usize {
            assert_eq!(m & (1 << v) != 0, v & (1 << (i - 1)) != 0);
        }
    }

    let mut instances = 0u64;
    let mut trained = 0u64;
    for subset_mask in 1u32..256 {
        let vecs: Vec<usize> = (0..8).filter(|v| subset_mask & (1 << v) != 0).collect();
        let k = vecs.len();
        let mut records: Vec<FeatureRecord> = vecs.iter().map(|&v| base_record(v)).collect();
        for code in 0..4u64.pow(k as u32) {
            instances += 1;
            let mut c = code;
            let mut label_idx = vec![0usize; k];
            for slot in label_idx.iter_mut() {
                *slot = (c % 4) as usize;
                c /= 4;
            }
            if label_idx.iter().all(|&l| l == 0) {
                continue; // train refuses all-empty labels
            }
            // brute force: every present atom must have a perfect
            // candidate among {always, w1, w2, w3}
            let mut zero_exists = true;
            for (a, _) in atoms.iter().enumerate() {
                let present = label_idx
                    .iter()
                    .any(|&l| l == a + 1 || l == 3);
                if !present {
                    continue;
                }
                let perfect = (0..4).any(|cand| {
                    (0..k).all(|r| {
                        let has_atom = label_idx[r] == a + 1 || label_idx[r] == 3;
                        holds(cand, vecs[r]) == has_atom
                    })
                });
                if !perfect {
                    zero_exists = false;
                    break;
                }
            }
            if !zero_exists {
                continue;
            }
            for (r, &l) in label_idx.iter().enumerate() {
                records[r].label = label_options[l].clone();
            }
            let rs = train(&records, &params).unwrap();
            for r in &records {
                assert_eq!(
                    predict(&rs, r),
                    r.label,
                    "nonzero training error on an instance with a zero-error hypothesis"
                );
            }
            trained += 1;
        }
    }
    let elapsed = started.elapsed();
    assert!(elapsed.as_secs_f64() < 60.0, "took {elapsed:?}, budget 60s");
    println!(
        "acceptance 8: pass — {trained} of {instances} enumerated instances had zero-error \
         hypotheses and the learner matched every one ({elapsed:?})"
    );
}

#[test]
fn a09_statistics_fidelity() {
    let tuple = |entity: &str, desc: &[&str]| EDTuple {
        entity: entity.into(),
        description: desc.iter().map(|w| w.to_string()).collect(),
        article_id: "a".into(),
        sentence_no: 0,
    };
    // 6 tuples: E1 has 2 distinct descriptions over 3 tuples, E2 has 1
    // distinct over 2 tuples, E3 has 1 over 1.
    let tuples = vec![
        tuple("E1", &["premier"]),
        tuple("E1", &["premier"]),
        tuple("E1", &["foreign", "minister"]),
        tuple("E2", &["senator"]),
        tuple("E2", &["senator"]),
        tuple("E3", &["governor"]),
    ];
    let profiles = build_profiles(&tuples, &Taxonomy::builtin(), TagMode::WordOnly);
    let stats = ddpe_histogram(&profiles);
    assert_eq!(stats.histogram, BTreeMap::from([(1, 2), (2, 1)]));
    assert_eq!(stats.entities, 3);
    assert_eq!(stats.tuples, 6);
    assert_eq!(stats.mean, 2.0);
    // the reported aggregate: 35,206 tuples over 11,504 entities
    let mean = mean_ddpe(35_206, 11_504);
    assert!((mean - 3.06).abs() < 0.005, "{mean}");
    println!("acceptance 9: pass — hand-counted histogram and the 3.06 aggregate mean both match");
}

#[test]
fn a10_end_to_end_determinism() {
    let spec_toml = r#"
        n_documents = 120
        entities = ["Alan Reed", "Bora Keller", "Cara Voss"]
        distractor_vocab = [
            "market", "report", "weather", "traffic", "harbor", "museum",
            "garden", "bridge", "festival", "journal",
        ]
        triggers = ["inflation", "strike"]

        [tags]
        banker = { offset = "21000001", parent = "21000100" }
        senator = { offset = "21000002", parent = "21000200" }

        [[descriptions]]
        name = "banker"
        words = ["banker"]

        [[descriptions]]
        name = "senator"
        words = ["senator"]

        [[rules]]
        trigger = "inflation"
        descriptions = ["banker"]

        [[rules]]
        trigger = "strike"
        descriptions = ["senator"]
    "#;
    let bin = env!("CARGO_BIN_EXE_lexchoice");
    let root = tempfile::tempdir().unwrap();
    let spec_path = root.path().join("spec.toml");
    std::fs::write(&spec_path, spec_toml).unwrap();

    let run_pipeline = |dir: &std::path::Path| {
        let arg = |p: &std::path::Path| p.to_str().unwrap().to_string();
        let steps: Vec<Vec<String>> = vec![
            vec![
                "synth".into(),
                "--spec".into(),
                arg(&spec_path),
                "--seed".into(),
                "7".into(),
                "--out".into(),
                arg(dir),
            ],
            vec![
                "extract".into(),
                "--corpus".into(),
                arg(&dir.join("corpus")),
                "--out".into(),
                arg(&dir.join("tuples.tsv")),
            ],
            vec![
                "profiles".into(),
                "--tuples".into(),
                arg(&dir.join("tuples.tsv")),
                "--taxonomy".into(),
                arg(&dir.join("taxonomy.txt")),
                "--mode".into(),
                "word".into(),
                "--out".into(),
                arg(&dir.join("profiles.jsonl")),
            ],
            vec![
                "records".into(),
                "--corpus".into(),
                arg(&dir.join("corpus")),
                "--tuples".into(),
                arg(&dir.join("tuples.tsv")),
                "--profiles".into(),
                arg(&dir.join("profiles.jsonl")),
                "--taxonomy".into(),
                arg(&dir.join("taxonomy.txt")),
                "--mode".into(),
                "word".into(),
                "--out".into(),
                arg(&dir.join("records.jsonl")),
            ],
            vec![
                "train".into(),
                "--records".into(),
                arg(&dir.join("records.jsonl")),
                "--out".into(),
                arg(&dir.join("rules.txt")),
            ],
            vec![
                "evaluate".into(),
                "--ruleset".into(),
                arg(&dir.join("rules.txt")),
                "--records".into(),
                arg(&dir.join("records.jsonl")),
                "--out".into(),
                arg(&dir.join("report.tsv")),
            ],
        ];
        for step in steps {
            let status = std::process::Command::new(bin)
                .args(&step)
                .stdout(std::process::Stdio::null())
                .status()
                .unwrap();
            assert!(status.success(), "step {step:?} failed");
        }
    };

    let dir_a = root.path().join("a");
    let dir_b = root.path().join("b");
    std::fs::create_dir_all(&dir_a).unwrap();
    std::fs::create_dir_all(&dir_b).unwrap();
    run_pipeline(&dir_a);
    run_pipeline(&dir_b);

    for file in [
        "taxonomy.txt",
        "truth.tsv",
        "tuples.tsv",
        "profiles.jsonl",
        "records.jsonl",
        "rules.txt",
        "report.tsv",
    ] {
        let a = std::fs::read(dir_a.join(file)).unwrap();
        let b = std::fs::read(dir_b.join(file)).unwrap();
        assert_eq!(a, b, "{file} differs between identical runs");
        assert!(!a.is_empty(), "{file} is empty");
    }
    let doc = "corpus/doc00000.txt";
    assert_eq!(
        std::fs::read(dir_a.join(doc)).unwrap(),
        std::fs::read(dir_b.join(doc)).unwrap()
    );
    println!("acceptance 10: pass — two seeded pipeline runs are byte-identical");
}
