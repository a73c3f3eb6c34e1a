//! Zigzag placement of alternating 1D and 2D panels.
//!
//! Cells live on a doubled grid: a 2D panel at panel coordinates `(r, c)`
//! sits at fine coordinates `(2r, 2c)`, and a 1D panel between two
//! neighbouring 2D panels sits at the fine midpoint, which always has
//! exactly one odd coordinate.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::zenpath::Zenpath;

pub const DEFAULT_WIDTH: usize = 9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Direction {
    #[serde(rename = "u")]
    Up,
    #[serde(rename = "d")]
    Down,
    #[serde(rename = "l")]
    Left,
    #[serde(rename = "r")]
    Right,
}

impl Direction {
    /// `(row, col)` offset; rows grow downwards.
    pub fn delta(self) -> (i64, i64) {
        match self {
            Direction::Up => (-1, 0),
            Direction::Down => (1, 0),
            Direction::Left => (0, -1),
            Direction::Right => (0, 1),
        }
    }

    pub fn is_horizontal(self) -> bool {
        matches!(self, Direction::Left | Direction::Right)
    }

    pub fn opposite(self) -> Self {
        match self {
            Direction::Up => Direction::Down,
            Direction::Down => Direction::Up,
            Direction::Left => Direction::Right,
            Direction::Right => Direction::Left,
        }
    }

    pub fn letter(self) -> char {
        match self {
            Direction::Up => 'u',
            Direction::Down => 'd',
            Direction::Left => 'l',
            Direction::Right => 'r',
        }
    }

    fn from_letter(c: char) -> Result<Self> {
        match c {
            'u' => Ok(Direction::Up),
            'd' => Ok(Direction::Down),
            'l' => Ok(Direction::Left),
            'r' => Ok(Direction::Right),
            other => Err(Error::InvalidArgument(format!(
                "unknown direction '{other}' (expected u, d, l or r)"
            ))),
        }
    }
}

/// Moves from each 2D panel to the next.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct DirectionSeq(pub Vec<Direction>);

impl DirectionSeq {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Converts a sequence written for alternating 1D and 2D panels, where
    /// each 2D step is spelled as two equal moves, into 2D steps. An odd
    /// length means the sequence starts at a 1D panel; its first move is
    /// returned separately as the leading direction.
    pub fn from_interleaved(moves: &[Direction]) -> Result<(Option<Direction>, DirectionSeq)> {
        let (leading, rest) = if moves.len() % 2 == 1 {
            (Some(moves[0]), &moves[1..])
        } else {
            (None, moves)
        };
        let mut out = Vec::with_capacity(rest.len() / 2);
        for (k, pair) in rest.chunks(2).enumerate() {
            if pair[0] != pair[1] {
                return Err(Error::InvalidArgument(format!(
                    "interleaved moves {} and {} differ ('{}' then '{}')",
                    2 * k + 1 + leading.is_some() as usize,
                    2 * k + 2 + leading.is_some() as usize,
                    pair[0].letter(),
                    pair[1].letter()
                )));
            }
            out.push(pair[0]);
        }
        Ok((leading, DirectionSeq(out)))
    }
}

impl fmt::Display for DirectionSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for d in &self.0 {
            write!(f, "{}", d.letter())?;
        }
        Ok(())
    }
}

/// Parses letters `u d l r`, optionally separated by commas or whitespace.
impl FromStr for DirectionSeq {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.chars()
            .filter(|c| !c.is_whitespace() && *c != ',')
            .map(Direction::from_letter)
            .collect::<Result<Vec<_>>>()
            .map(DirectionSeq)
    }
}

/// The default boustrophedon: two-row bands `r, d, r, u, ...` that turn
/// down and reverse once the next pair of columns would leave `width`.
/// Width 2 degenerates to the snake `r, d, l, d`.
pub fn default_zigzag(n2d: usize, width: usize) -> Result<DirectionSeq> {
    if n2d == 0 {
        return Err(Error::InvalidArgument("need at least one 2D panel".into()));
    }
    if width < 2 {
        return Err(Error::InvalidArgument(format!("width must be at least 2 (got {width})")));
    }
    let steps = n2d - 1;
    if width == 2 {
        let cycle = [Direction::Right, Direction::Down, Direction::Left, Direction::Down];
        return Ok(DirectionSeq((0..steps).map(|k| cycle[k % 4]).collect()));
    }
    let w = width as i64;
    let mut out = Vec::with_capacity(steps);
    let (mut col, mut upper) = (0i64, true);
    let mut heading = Direction::Right;
    let mut last: Option<Direction> = None;
    for _ in 0..steps {
        let last_h = last.is_some_and(Direction::is_horizontal);
        let next = if upper {
            if last_h {
                upper = false;
                Direction::Down
            } else {
                heading
            }
        } else if !last_h {
            heading
        } else {
            let step = heading.delta().1;
            let beyond = col + 2 * step;
            if beyond < 0 || beyond > w - 1 {
                heading = heading.opposite();
                upper = true;
                last = Some(Direction::Down);
                out.push(Direction::Down);
                continue;
            }
            upper = true;
            Direction::Up
        };
        col += next.delta().1;
        last = Some(next);
        out.push(next);
    }
    Ok(DirectionSeq(out))
}

/// Panel coordinates of the 2D slots visited by `dirs`, starting at
/// `(0, 0)`. Revisiting a cell is an error naming the offending step
/// (1-based index into `dirs`).
pub fn place_cells(dirs: &DirectionSeq) -> Result<Vec<(i64, i64)>> {
    let mut pos = (0i64, 0i64);
    let mut cells = vec![pos];
    let mut seen: HashSet<(i64, i64)> = HashSet::from([pos]);
    for (k, d) in dirs.0.iter().enumerate() {
        let (dr, dc) = d.delta();
        pos = (pos.0 + dr, pos.1 + dc);
        if !seen.insert(pos) {
            return Err(Error::LayoutCollision {
                step: k + 1,
                row: pos.0,
                col: pos.1,
            });
        }
        cells.push(pos);
    }
    Ok(cells)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CellKind {
    /// A data panel.
    Panel,
    /// Empty 2D slot between two groups.
    Separator,
    /// 1D panel naming a variate.
    Label,
    /// 1D "V" marker pointing to the next panel.
    Arrow,
}

impl CellKind {
    pub fn is_2d(self) -> bool {
        matches!(self, CellKind::Panel | CellKind::Separator)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Cell {
    pub kind: CellKind,
    /// Fine-grid row (2D panels at even coordinates).
    pub row: i64,
    pub col: i64,
    pub group: usize,
    /// Index of the data panel among all `Panel` cells.
    pub panel: Option<usize>,
    pub horizontal: Option<usize>,
    pub vertical: Option<usize>,
    /// Variate named by a `Label`.
    pub label: Option<usize>,
    /// Direction an `Arrow` points in.
    pub arrow: Option<Direction>,
}

impl Cell {
    fn one_d(kind: CellKind, at: (i64, i64), group: usize) -> Self {
        Self {
            kind,
            row: at.0,
            col: at.1,
            group,
            panel: None,
            horizontal: None,
            vertical: None,
            label: None,
            arrow: None,
        }
    }

    /// Panel-grid coordinates of a 2D cell.
    pub fn panel_cell(&self) -> Option<(i64, i64)> {
        self.kind.is_2d().then_some((self.row / 2, self.col / 2))
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct LayoutGrid {
    pub cells: Vec<Cell>,
}

impl LayoutGrid {
    /// Data panels in panel order.
    pub fn panels(&self) -> Vec<&Cell> {
        let mut p: Vec<&Cell> = self.cells.iter().filter(|c| c.kind == CellKind::Panel).collect();
        p.sort_by_key(|c| c.panel);
        p
    }

    pub fn panel_count(&self) -> usize {
        self.cells.iter().filter(|c| c.kind == CellKind::Panel).count()
    }

    /// `(min_row, max_row, min_col, max_col)` in fine coordinates.
    pub fn bounds(&self) -> Option<(i64, i64, i64, i64)> {
        let first = self.cells.first()?;
        let mut b = (first.row, first.row, first.col, first.col);
        for c in &self.cells {
            b.0 = b.0.min(c.row);
            b.1 = b.1.max(c.row);
            b.2 = b.2.min(c.col);
            b.3 = b.3.max(c.col);
        }
        Some(b)
    }

    fn add_1d(&mut self, occupied: &mut HashSet<(i64, i64)>, cell: Cell) {
        // Best-effort end labels are dropped if a connector already owns the slot.
        if occupied.insert((cell.row, cell.col)) {
            self.cells.push(cell);
        }
    }
}

fn fine(p: (i64, i64)) -> (i64, i64) {
    (2 * p.0, 2 * p.1)
}

/// Fine coordinates of the 1D slot between two neighbouring panel cells.
fn between(a: (i64, i64), b: (i64, i64)) -> (i64, i64) {
    (a.0 + b.0, a.1 + b.1)
}

fn beside(p: (i64, i64), d: Direction) -> (i64, i64) {
    let (dr, dc) = d.delta();
    (2 * p.0 + dr, 2 * p.1 + dc)
}

fn resolve_dirs(slots: usize, dirs: Option<&DirectionSeq>, width: usize) -> Result<DirectionSeq> {
    match dirs {
        Some(d) => {
            if d.len() + 1 != slots {
                return Err(Error::InvalidArgument(format!(
                    "direction sequence has {} moves but the layout has {slots} 2D slots (need {})",
                    d.len(),
                    slots.saturating_sub(1)
                )));
            }
            Ok(d.clone())
        }
        None => default_zigzag(slots, width),
    }
}

enum Slot {
    Panel { group: usize, a: usize, b: usize },
    Separator,
}

/// Lays out the pairs of `path`. Each consecutive pair of a group becomes a
/// 2D panel; consecutive panels of a group are joined by a label naming the
/// shared variate, which must therefore alternate between the vertical
/// axis (horizontal move) and the horizontal axis (vertical move). Groups
/// are separated by an empty 2D slot flanked by the boundary variates.
pub fn layout(path: &Zenpath, dirs: Option<&DirectionSeq>, width: usize) -> Result<LayoutGrid> {
    let mut slots = Vec::new();
    for (g, group) in path.groups.iter().enumerate() {
        if group.len() < 2 {
            return Err(Error::InvalidArgument(format!("group {g} has fewer than 2 variates")));
        }
        if g > 0 {
            slots.push(Slot::Separator);
        }
        for w in group.windows(2) {
            slots.push(Slot::Panel {
                group: g,
                a: w[0],
                b: w[1],
            });
        }
    }
    let mut grid = LayoutGrid::default();
    if slots.is_empty() {
        return Ok(grid);
    }
    let dirs = resolve_dirs(slots.len(), dirs, width)?;
    let pos = place_cells(&dirs)?;
    let same_group = |s: usize, t: usize| match (&slots[s], &slots[t]) {
        (Slot::Panel { group: g1, .. }, Slot::Panel { group: g2, .. }) => g1 == g2,
        _ => false,
    };
    for s in 1..slots.len().saturating_sub(1) {
        if same_group(s - 1, s)
            && same_group(s, s + 1)
            && dirs.0[s - 1].is_horizontal() == dirs.0[s].is_horizontal()
        {
            return Err(Error::AxisConflict { step: s + 1 });
        }
    }

    let mut occupied: HashSet<(i64, i64)> = pos.iter().map(|&p| fine(p)).collect();
    let mut panel_index = 0;
    let mut last_group = 0;
    for (s, slot) in slots.iter().enumerate() {
        let at = fine(pos[s]);
        match *slot {
            Slot::Separator => grid.cells.push(Cell {
                kind: CellKind::Separator,
                row: at.0,
                col: at.1,
                group: last_group,
                panel: None,
                horizontal: None,
                vertical: None,
                label: None,
                arrow: None,
            }),
            Slot::Panel { group, a, b } => {
                last_group = group;
                let incoming = (s > 0 && same_group(s - 1, s)).then(|| dirs.0[s - 1]);
                let outgoing = (s + 1 < slots.len() && same_group(s, s + 1)).then(|| dirs.0[s]);
                // the variate shared with the previous panel keeps its axis
                let (h, v) = match (incoming, outgoing) {
                    (Some(d), _) if d.is_horizontal() => (b, a),
                    (Some(_), _) => (a, b),
                    (None, Some(d)) if d.is_horizontal() => (a, b),
                    (None, Some(_)) => (b, a),
                    (None, None) => (a, b),
                };
                grid.cells.push(Cell {
                    kind: CellKind::Panel,
                    row: at.0,
                    col: at.1,
                    group,
                    panel: Some(panel_index),
                    horizontal: Some(h),
                    vertical: Some(v),
                    label: None,
                    arrow: None,
                });
                panel_index += 1;
            }
        }
    }

    // connectors and boundary labels between consecutive slots
    for s in 0..slots.len() - 1 {
        let mid = between(pos[s], pos[s + 1]);
        let (group, variate) = match (&slots[s], &slots[s + 1]) {
            (Slot::Panel { group, b, .. }, _) => (*group, *b),
            (Slot::Separator, Slot::Panel { group, a, .. }) => (*group, *a),
            (Slot::Separator, Slot::Separator) => unreachable!("separators never touch"),
        };
        let mut c = Cell::one_d(CellKind::Label, mid, group);
        c.label = Some(variate);
        grid.add_1d(&mut occupied, c);
    }
    // outer end labels
    if let Slot::Panel { group, a, .. } = slots[0] {
        let side = dirs.0.first().map_or(Direction::Left, |d| d.opposite());
        let mut c = Cell::one_d(CellKind::Label, beside(pos[0], side), group);
        c.label = Some(a);
        grid.add_1d(&mut occupied, c);
    }
    let last = slots.len() - 1;
    if let Slot::Panel { group, b, .. } = slots[last] {
        let side = dirs.0.last().copied().unwrap_or(Direction::Right);
        let mut c = Cell::one_d(CellKind::Label, beside(pos[last], side), group);
        c.label = Some(b);
        grid.add_1d(&mut occupied, c);
    }
    Ok(grid)
}

/// Lays out `n` single-variate panels (ACF, Q-Q) joined by arrows, with an
/// optional leading arrow that points into the first panel from the side
/// opposite `leading`.
pub fn layout_sequence(
    n: usize,
    dirs: Option<&DirectionSeq>,
    width: usize,
    leading: Option<Direction>,
) -> Result<LayoutGrid> {
    let mut grid = LayoutGrid::default();
    if n == 0 {
        return Ok(grid);
    }
    let dirs = resolve_dirs(n, dirs, width)?;
    let pos = place_cells(&dirs)?;
    let mut occupied: HashSet<(i64, i64)> = pos.iter().map(|&p| fine(p)).collect();
    for (k, &p) in pos.iter().enumerate() {
        let at = fine(p);
        grid.cells.push(Cell {
            kind: CellKind::Panel,
            row: at.0,
            col: at.1,
            group: 0,
            panel: Some(k),
            horizontal: Some(k),
            vertical: None,
            label: None,
            arrow: None,
        });
    }
    if let Some(d) = leading {
        let mut c = Cell::one_d(CellKind::Arrow, beside(pos[0], d.opposite()), 0);
        c.arrow = Some(d);
        grid.add_1d(&mut occupied, c);
    }
    for (k, d) in dirs.0.iter().enumerate() {
        let mut c = Cell::one_d(CellKind::Arrow, between(pos[k], pos[k + 1]), 0);
        c.arrow = Some(*d);
        grid.add_1d(&mut occupied, c);
    }
    Ok(grid)
}
