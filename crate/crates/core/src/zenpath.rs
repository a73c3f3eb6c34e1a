//! Ordering variate pairs into zenpaths: ranked and extreme pairs, greedy
//! connection into shared-variate groups, sector filters and the Eulerian
//! walk through all pairs.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::dataset::SectorMap;
use crate::dependence::DependenceMatrix;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScoredPair {
    pub i: usize,
    pub j: usize,
    pub score: f64,
}

/// Pairs with `i < j`, no unordered pair repeated.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct PairList {
    pub pairs: Vec<ScoredPair>,
}

impl PairList {
    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RankOrder {
    Descending,
    Ascending,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SectorFilter {
    Within,
    Cross,
}

/// Ordered groups of variate indices; consecutive entries of a group are
/// the displayed pairs. Nothing connects the end of one group to the start
/// of the next.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct Zenpath {
    pub groups: Vec<Vec<usize>>,
    /// `scores[g][k]` belongs to the pair `(groups[g][k], groups[g][k + 1])`;
    /// NaN when the path carries no score.
    pub scores: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ZenpathJson {
    pub groups: Vec<Vec<String>>,
    pub scores: Vec<Vec<Option<f64>>>,
}

impl Zenpath {
    /// The single chain `0, 1, ..., d-1`.
    pub fn chain(d: usize) -> Self {
        let group: Vec<usize> = (0..d).collect();
        Self {
            scores: vec![vec![f64::NAN; d.saturating_sub(1)]],
            groups: vec![group],
        }
    }

    /// Consecutive pairs of every group, in order.
    pub fn pairs(&self) -> Vec<(usize, usize)> {
        self.groups
            .iter()
            .flat_map(|g| g.windows(2).map(|w| (w[0], w[1])))
            .collect()
    }

    pub fn to_json(&self, tickers: &[String]) -> ZenpathJson {
        ZenpathJson {
            groups: self
                .groups
                .iter()
                .map(|g| g.iter().map(|&k| tickers[k].clone()).collect())
                .collect(),
            scores: self
                .scores
                .iter()
                .map(|s| s.iter().map(|v| v.is_finite().then_some(*v)).collect())
                .collect(),
        }
    }

    pub fn from_json(j: &ZenpathJson, tickers: &[String]) -> Result<Self> {
        let find = |t: &String| {
            tickers
                .iter()
                .position(|x| x == t)
                .ok_or_else(|| Error::InvalidArgument(format!("unknown ticker \"{t}\" in zenpath")))
        };
        let groups = j
            .groups
            .iter()
            .map(|g| g.iter().map(find).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        let scores = j
            .scores
            .iter()
            .map(|s| s.iter().map(|v| v.unwrap_or(f64::NAN)).collect())
            .collect();
        Ok(Self { groups, scores })
    }
}

/// All finite off-diagonal pairs of `m` sorted by score, ties by `(i, j)`.
/// With a sector filter, pairs are kept only when the two tickers share a
/// sector (`Within`) or do not (`Cross`).
pub fn rank_pairs(
    m: &DependenceMatrix,
    order: RankOrder,
    filter: Option<(&SectorMap, SectorFilter)>,
) -> Result<PairList> {
    let d = m.dim();
    if let Some((sectors, _)) = filter {
        sectors.check_covers(&m.tickers)?;
    }
    let mut pairs = Vec::new();
    for i in 0..d {
        for j in i + 1..d {
            let Some(score) = m.get(i, j) else { continue };
            if let Some((sectors, f)) = filter {
                let same = sectors.sector_of(&m.tickers[i]) == sectors.sector_of(&m.tickers[j]);
                if same != (f == SectorFilter::Within) {
                    continue;
                }
            }
            pairs.push(ScoredPair { i, j, score });
        }
    }
    if pairs.is_empty() {
        return Err(Error::InvalidArgument("no pairs remain to rank".into()));
    }
    pairs.sort_by(|a, b| {
        let c = match order {
            RankOrder::Descending => b.score.total_cmp(&a.score),
            RankOrder::Ascending => a.score.total_cmp(&b.score),
        };
        c.then((a.i, a.j).cmp(&(b.i, b.j)))
    });
    Ok(PairList { pairs })
}

/// The first `k_top` pairs of a descending list followed by the last
/// `k_bottom`, smallest first.
pub fn extreme_pairs(pl: &PairList, k_top: usize, k_bottom: usize) -> Result<PairList> {
    let n = pl.len();
    if k_top + k_bottom > n {
        return Err(Error::InvalidArgument(format!(
            "requested {k_top} top and {k_bottom} bottom pairs but only {n} are available"
        )));
    }
    let mut pairs = pl.pairs[..k_top].to_vec();
    pairs.extend(pl.pairs[n - k_bottom..].iter().rev());
    Ok(PairList { pairs })
}

/// Greedy single pass: a pair extends the current group when it contains
/// the group's end variate, otherwise it opens a new group. A one-pair
/// group may be reversed so that it ends in the variate the next pair
/// shares. With `dedup`, pairs already adjacent in the current group are
/// dropped.
pub fn connect_pairs(pl: &PairList, dedup: bool) -> Zenpath {
    let mut path = Zenpath::default();
    let mut seq: Vec<usize> = Vec::new();
    let mut scores: Vec<f64> = Vec::new();
    let flush = |seq: &mut Vec<usize>, scores: &mut Vec<f64>, path: &mut Zenpath| {
        if !seq.is_empty() {
            path.groups.push(std::mem::take(seq));
            path.scores.push(std::mem::take(scores));
        }
    };
    for p in &pl.pairs {
        let (a, b) = (p.i, p.j);
        if seq.is_empty() {
            seq.extend([a, b]);
            scores.push(p.score);
            continue;
        }
        if dedup
            && seq
                .windows(2)
                .any(|w| (w[0] == a && w[1] == b) || (w[0] == b && w[1] == a))
        {
            continue;
        }
        let end = *seq.last().expect("non-empty");
        if seq.len() == 2 && end != a && end != b && (seq[0] == a || seq[0] == b) {
            seq.reverse();
        }
        let end = *seq.last().expect("non-empty");
        if end == a || end == b {
            seq.push(if end == a { b } else { a });
            scores.push(p.score);
        } else {
            flush(&mut seq, &mut scores, &mut path);
            seq.extend([a, b]);
            scores.push(p.score);
        }
    }
    flush(&mut seq, &mut scores, &mut path);
    path
}

/// A single walk whose consecutive pairs cover every pair of `0..d`.
///
/// For odd `d` the complete graph is Eulerian and every pair appears once.
/// For even `d` the pairs `(2,3), (4,5), ...` are doubled, leaving `0` and
/// `1` as the only odd vertices, so an open walk from `0` to `1` exists with
/// `d/2 - 1` repeated pairs. Hierholzer's algorithm always takes the
/// smallest available neighbour.
pub fn eulerian_all_pairs(d: usize) -> Result<Zenpath> {
    if d < 2 {
        return Err(Error::InvalidArgument(format!("need at least 2 variates (got {d})")));
    }
    let mut count = vec![0u32; d * d];
    for i in 0..d {
        for j in 0..d {
            if i != j {
                count[i * d + j] = 1;
            }
        }
    }
    if d % 2 == 0 {
        for k in (2..d).step_by(2) {
            count[k * d + k + 1] += 1;
            count[(k + 1) * d + k] += 1;
        }
    }
    let mut next = vec![0usize; d];
    let mut stack = vec![0usize];
    let mut walk = Vec::with_capacity(d * (d - 1) / 2 + d);
    while let Some(&v) = stack.last() {
        while next[v] < d && count[v * d + next[v]] == 0 {
            next[v] += 1;
        }
        if next[v] < d {
            let w = next[v];
            count[v * d + w] -= 1;
            count[w * d + v] -= 1;
            stack.push(w);
        } else {
            walk.push(v);
            stack.pop();
        }
    }
    walk.reverse();
    Ok(Zenpath {
        scores: vec![vec![f64::NAN; walk.len() - 1]],
        groups: vec![walk],
    })
}

/// For each sector (lexicographic order) the first connected group of its
/// descending within-sector pairs. Sectors that cannot contribute a pair
/// are skipped and reported in the returned notes.
pub fn per_sector_paths(m: &DependenceMatrix, sectors: &SectorMap) -> Result<(Zenpath, Vec<String>)> {
    sectors.check_covers(&m.tickers)?;
    let mut members: BTreeMap<&str, Vec<usize>> = BTreeMap::new();
    for (k, t) in m.tickers.iter().enumerate() {
        members
            .entry(sectors.sector_of(t).expect("covered"))
            .or_default()
            .push(k);
    }
    let mut path = Zenpath::default();
    let mut notes = Vec::new();
    for (sector, idx) in &members {
        if idx.len() < 2 {
            notes.push(format!("sector \"{sector}\" has fewer than 2 members; skipped"));
            continue;
        }
        let mut pairs = Vec::new();
        for (a, &i) in idx.iter().enumerate() {
            for &j in &idx[a + 1..] {
                if let Some(score) = m.get(i, j) {
                    pairs.push(ScoredPair { i, j, score });
                }
            }
        }
        if pairs.is_empty() {
            notes.push(format!("sector \"{sector}\" has no finite pair scores; skipped"));
            continue;
        }
        pairs.sort_by(|a, b| b.score.total_cmp(&a.score).then((a.i, a.j).cmp(&(b.i, b.j))));
        let z = connect_pairs(&PairList { pairs }, true);
        path.groups.push(z.groups[0].clone());
        path.scores.push(z.scores[0].clone());
    }
    if path.groups.is_empty() {
        return Err(Error::InvalidArgument("no sector contributes a pair".into()));
    }
    Ok((path, notes))
}
