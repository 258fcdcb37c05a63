//! Labeled graph collections: generation and directory I/O.
//!
//! A dataset directory holds one edge-list file per graph and a
//! `labels.csv` with `filename,label` rows.

use std::fs;
use std::path::Path;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Location, Result};
use crate::graph::{erdos_renyi, planted_cycle_graph, read_graph_file, Graph};

pub const LABELS_FILE: &str = "labels.csv";

/// Desk-scale split sizes for the cycle task.
pub const DESK_SPLIT: (usize, usize, usize) = (1800, 200, 2000);

/// Node-count range of cycle-task graphs; each has `3n/2` edges.
pub const CYCLE_NODES: (usize, usize) = (16, 24);

pub type Labeled = Vec<(Graph, i64)>;

/// `count` graphs alternating positive (label 1, exactly one planted
/// `cycle_len`-cycle) and negative (label 0, none). Each consecutive pair
/// shares its node and edge counts.
pub fn cycle_dataset(cycle_len: usize, count: usize, seed: u64) -> Result<Labeled> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let n = rng.gen_range(CYCLE_NODES.0..=CYCLE_NODES.1);
        let m = 3 * n / 2;
        let pos = planted_cycle_graph(cycle_len, true, n, m, &mut rng)?;
        let neg = planted_cycle_graph(cycle_len, false, n, m, &mut rng)?;
        if pos.num_edges() != m || neg.num_edges() != m {
            continue;
        }
        out.push((pos, 1));
        if out.len() < count {
            out.push((neg, 0));
        }
    }
    Ok(out)
}

/// Train, validation and test sets drawn from independent seeds.
pub fn cycle_splits(
    cycle_len: usize,
    sizes: (usize, usize, usize),
    seed: u64,
) -> Result<(Labeled, Labeled, Labeled)> {
    Ok((
        cycle_dataset(cycle_len, sizes.0, seed)?,
        cycle_dataset(cycle_len, sizes.1, seed.wrapping_add(1))?,
        cycle_dataset(cycle_len, sizes.2, seed.wrapping_add(2))?,
    ))
}

/// Erdős–Rényi graphs with `n` uniform in `nodes` and mean degree close to
/// `mean_degree`.
pub fn random_corpus(
    count: usize,
    nodes: (usize, usize),
    mean_degree: f64,
    seed: u64,
) -> Vec<Graph> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let n = rng.gen_range(nodes.0..=nodes.1);
            let p = mean_degree / (n.max(2) - 1) as f64;
            erdos_renyi(n, p, &mut rng)
        })
        .collect()
}

/// Seeded shuffle of `data` cut into train, validation and test parts of
/// roughly `80/10/10` percent.
pub fn split_dataset(mut data: Labeled, seed: u64) -> (Labeled, Labeled, Labeled) {
    data.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    let n = data.len();
    let n_val = n / 10;
    let n_test = n / 10;
    let test = data.split_off(n - n_test);
    let val = data.split_off(n - n_test - n_val);
    (data, val, test)
}

fn file_name(i: usize) -> String {
    format!("g{i:05}.txt")
}

/// Writes graphs as edge lists plus `labels.csv`.
pub fn write_dataset(dir: impl AsRef<Path>, data: &[(Graph, i64)]) -> Result<()> {
    let dir = dir.as_ref();
    fs::create_dir_all(dir)?;
    let mut labels = String::from("filename,label\n");
    for (i, (g, y)) in data.iter().enumerate() {
        let name = file_name(i);
        fs::write(dir.join(&name), g.to_edge_list())?;
        labels.push_str(&format!("{name},{y}\n"));
    }
    fs::write(dir.join(LABELS_FILE), labels)?;
    Ok(())
}

/// Writes unlabeled graphs; every label is 0.
pub fn write_corpus(dir: impl AsRef<Path>, graphs: &[Graph]) -> Result<()> {
    let data: Vec<(Graph, i64)> = graphs.iter().cloned().map(|g| (g, 0)).collect();
    write_dataset(dir, &data)
}

/// Reads a dataset directory in `labels.csv` order.
pub fn read_dataset(dir: impl AsRef<Path>) -> Result<Labeled> {
    let dir = dir.as_ref();
    let text = fs::read_to_string(dir.join(LABELS_FILE))?;
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || (i == 0 && line == "filename,label") {
            continue;
        }
        let malformed = |message: String| Error::Malformed {
            at: Location::Line(i + 1),
            message,
        };
        let (name, label) = line
            .split_once(',')
            .ok_or_else(|| malformed(format!("expected filename,label in {line:?}")))?;
        let label: i64 = label
            .trim()
            .parse()
            .map_err(|_| malformed(format!("label {label:?} is not an integer")))?;
        out.push((read_graph_file(dir.join(name.trim()))?, label));
    }
    if out.is_empty() {
        return Err(Error::EmptyDataset);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::descriptors::cycle_count;

    #[test]
    fn cycle_dataset_is_balanced_and_correct() {
        let data = cycle_dataset(4, 40, 1).unwrap();
        assert_eq!(data.len(), 40);
        assert_eq!(data.iter().filter(|(_, y)| *y == 1).count(), 20);
        for pair in data.chunks(2) {
            assert_eq!(pair[0].0.num_nodes(), pair[1].0.num_nodes());
            assert_eq!(pair[0].0.num_edges(), pair[1].0.num_edges());
        }
        for (g, y) in &data {
            assert_eq!(cycle_count(g, 4).unwrap(), *y as u64);
        }
    }

    #[test]
    fn generation_is_seeded() {
        assert_eq!(
            cycle_dataset(4, 10, 3).unwrap(),
            cycle_dataset(4, 10, 3).unwrap()
        );
        assert_ne!(
            cycle_dataset(4, 10, 3).unwrap(),
            cycle_dataset(4, 10, 4).unwrap()
        );
        assert_eq!(
            random_corpus(5, (20, 30), 3.7, 9),
            random_corpus(5, (20, 30), 3.7, 9)
        );
    }

    #[test]
    fn split_is_seeded_and_complete() {
        let data = cycle_dataset(4, 20, 5).unwrap();
        let (a, b, c) = split_dataset(data.clone(), 1);
        assert_eq!((a.len(), b.len(), c.len()), (16, 2, 2));
        let (a2, _, _) = split_dataset(data, 1);
        assert_eq!(a, a2);
    }

    #[test]
    fn directory_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let data = cycle_dataset(4, 6, 2).unwrap();
        write_dataset(dir.path(), &data).unwrap();
        assert_eq!(read_dataset(dir.path()).unwrap(), data);
    }

    #[test]
    fn bad_labels_file() {
        let dir = tempfile::tempdir().unwrap();
        fs::write(dir.path().join(LABELS_FILE), "filename,label\nmissing\n").unwrap();
        assert!(matches!(
            read_dataset(dir.path()),
            Err(Error::Malformed { .. })
        ));
        fs::write(dir.path().join(LABELS_FILE), "filename,label\n").unwrap();
        assert!(matches!(read_dataset(dir.path()), Err(Error::EmptyDataset)));
    }
}
