use std::sync::OnceLock;

use gsc_core::census::grid_orbits;
use gsc_core::dirichlet::{symmetrize, EnergyForm, DEFAULT_TOLERANCE};
use gsc_core::graph::{apply_symmetry_to_graph, build_cell_graph, subcell_embedding, CellGraph};
use gsc_core::scaling::{resistance_sequence, ScalingReport};
use gsc_core::symmetry::{enumerate_cube_group, first_axis_reflections};
use gsc_core::validate::{bb99_condition, check_symmetry};
use gsc_core::word::Word;
use gsc_core::CarpetSpec;
use proptest::prelude::*;
use proptest::sample::{select, subsequence};

fn decode(code: u64, d: usize, l: u32) -> Vec<u32> {
    let mut c = code;
    (0..d)
        .map(|_| {
            let x = (c % l as u64) as u32;
            c /= l as u64;
            x
        })
        .collect()
}

/// A nonempty union of cube-group orbits, excluding the full grid.
fn symmetric_spec() -> impl Strategy<Value = CarpetSpec> {
    (prop_oneof![Just((2usize, 3u32)), Just((2, 4)), Just((2, 5)), Just((3, 3)), Just((3, 4))])
        .prop_flat_map(|(d, l)| {
            let orbits = grid_orbits(d, l).unwrap();
            let k = orbits.len();
            (Just((d, l)), subsequence(orbits, 1..k))
        })
        .prop_map(|((d, l), chosen)| {
            let cells: Vec<Vec<u32>> = chosen.iter().flatten().map(|&c| decode(c, d, l)).collect();
            CarpetSpec::new(d, l, cells).unwrap()
        })
}

fn any_spec() -> impl Strategy<Value = (CarpetSpec, Vec<Vec<u32>>)> {
    (2usize..=3, 3u32..=5)
        .prop_flat_map(|(d, l)| {
            let grid = (l as u64).pow(d as u32);
            let all: Vec<u64> = (0..grid).collect();
            (Just((d, l)), subsequence(all, 1..grid as usize), any::<u64>())
        })
        .prop_map(|((d, l), codes, salt)| {
            let mut cells: Vec<Vec<u32>> = codes.iter().map(|&c| decode(c, d, l)).collect();
            let n = cells.len();
            cells.rotate_left((salt % n as u64) as usize);
            if salt & 1 == 1 {
                cells.reverse();
            }
            (CarpetSpec::new(d, l, &cells).unwrap(), cells)
        })
}

fn carpet(n: u32) -> &'static CellGraph {
    static GRAPHS: OnceLock<Vec<CellGraph>> = OnceLock::new();
    &GRAPHS.get_or_init(|| {
        (1..=3)
            .map(|n| build_cell_graph(&CarpetSpec::sierpinski_carpet(), n, 1 << 22).unwrap())
            .collect()
    })[n as usize - 1]
}

fn base_report() -> &'static ScalingReport {
    static REPORT: OnceLock<ScalingReport> = OnceLock::new();
    REPORT.get_or_init(|| resistance_sequence(&CarpetSpec::sierpinski_carpet(), 4, DEFAULT_TOLERANCE, 1 << 22).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn group_is_closed_under_composition(d in 2usize..=4, a in any::<prop::sample::Index>(), b in any::<prop::sample::Index>()) {
        let group = enumerate_cube_group(d).unwrap();
        let (x, y) = (a.get(&group), b.get(&group));
        prop_assert!(group.contains(&x.compose(y)));
        prop_assert!(group.contains(&x.inverse()));
        prop_assert!(x.compose(&x.inverse()).is_identity());
        let p = [0u32, 1, 2, 3];
        prop_assert_eq!(x.compose(y).apply(&p[..d], 7), x.apply(&y.apply(&p[..d], 7), 7));
    }

    #[test]
    fn orbit_unions_are_symmetric(spec in symmetric_spec()) {
        prop_assert!(check_symmetry(&spec).pass);
        let counts = bb99_condition(&spec).slab_counts;
        for k in 1..spec.d() {
            prop_assert_eq!(&spec.slab_counts(k), &counts);
        }
    }

    #[test]
    fn canonical_json_round_trips((spec, cells) in any_spec()) {
        let text = spec.to_canonical_json();
        let back = CarpetSpec::from_json_str(&text).unwrap();
        prop_assert_eq!(&back, &spec);
        prop_assert_eq!(back.to_canonical_json(), text);
        prop_assert_eq!(back.hash(), spec.hash());
        let loose = serde_json::json!({"d": spec.d(), "l": spec.l(), "S": cells}).to_string();
        prop_assert_eq!(CarpetSpec::from_json_str(&loose).unwrap().hash(), spec.hash());
        prop_assert!(spec.codes().windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn energy_is_invariant_under_automorphisms(
        u in prop::collection::vec(-2.0f64..2.0, 64),
        g in select(enumerate_cube_group(2).unwrap()),
    ) {
        let graph = carpet(2);
        let form = EnergyForm::new(graph);
        let p = apply_symmetry_to_graph(graph, &g).unwrap();
        let mut moved = vec![0.0; u.len()];
        for (c, &img) in p.iter().enumerate() {
            moved[img as usize] = u[c];
        }
        let (a, b) = (form.energy(&u), form.energy(&moved));
        prop_assert!((a - b).abs() <= 1e-12 * a.max(1.0));
    }

    #[test]
    fn symmetrized_functions_are_exactly_invariant(u in prop::collection::vec(-0.5f64..1.5, 512)) {
        let graph = carpet(3);
        let group = first_axis_reflections(2);
        let s = symmetrize(graph, &u, &group).unwrap();
        prop_assert!(s.iter().all(|v| (0.0..=1.0).contains(v)));
        for g in &group {
            let p = apply_symmetry_to_graph(graph, g).unwrap();
            prop_assert!((0..s.len()).all(|c| s[p[c] as usize] == s[c]));
        }
        prop_assert_eq!(symmetrize(graph, &s, &group).unwrap(), s);
    }

    #[test]
    fn ratio_and_estimate_agree(energies in prop::collection::vec(1e-3f64..1e3, 4)) {
        let mut report = base_report().clone();
        for (rec, e) in report.levels.iter_mut().zip(&energies) {
            rec.energy = *e;
        }
        report.derive();
        let s = report.cells_per_level as f64;
        let l = report.l as f64;
        for k in 0..3 {
            let r = energies[k + 1] / energies[k];
            prop_assert_eq!(report.ratios[k], r);
            prop_assert!((report.dw_estimates[k] - (s / r).ln() / l.ln()).abs() < 1e-12);
            prop_assert!((s * l.powf(-report.dw_estimates[k]) / r - 1.0).abs() < 1e-12);
            prop_assert_eq!(report.margins[k] > 0.0, report.dw_estimates[k] > 2.0);
        }
    }

    #[test]
    fn word_origins_are_positional(letters in prop::collection::vec(0usize..8, 0..4)) {
        let sc = CarpetSpec::sierpinski_carpet();
        let alphabet: Vec<Vec<u32>> = sc.tuples().collect();
        let w = Word::new(&sc, letters.iter().map(|&k| alphabet[k].clone()).collect()).unwrap();
        let m = letters.len() as u32;
        let o = w.cell_origin(&sc);
        for axis in 0..2 {
            let want: u64 = letters
                .iter()
                .enumerate()
                .map(|(t, &k)| alphabet[k][axis] as u64 * 3u64.pow(m - 1 - t as u32))
                .sum();
            prop_assert_eq!(o[axis], want);
            prop_assert!(o[axis] < 3u64.pow(m));
        }
        if (1..=2).contains(&m) {
            let inner = carpet(3 - m);
            let map = subcell_embedding(inner, carpet(3), &w).unwrap();
            let base = 3u64.pow(3 - m);
            for (v, &img) in map.iter().enumerate() {
                let vo = inner.origin(v);
                let io = carpet(3).origin(img as usize);
                prop_assert_eq!(io, vec![o[0] * base + vo[0], o[1] * base + vo[1]]);
            }
        }
    }
}
