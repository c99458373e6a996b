//! Latin squares, row-Latin squares and Latin arrays, together with the
//! operations that rearrange them: conjugation, row/column deletion and
//! intercalate turning.
//!
//! Symbols are stored 0-based; every text format and error message is
//! 1-based. Orders are capped at [`MAX_ORDER`] so that column/symbol sets fit
//! in single-word bitmasks throughout the counting kernels.

use crate::error::{Error, Result};

/// Largest supported side length / symbol universe.
pub const MAX_ORDER: usize = 64;

/// Row-major read access shared by every symbol grid in the crate.
pub trait Cells {
    fn rows(&self) -> usize;
    fn cols(&self) -> usize;
    /// Size of the symbol universe; cell values lie in `0..symbols()`.
    fn symbols(&self) -> usize;
    /// Cells in row-major order.
    fn cells(&self) -> &[u8];

    fn at(&self, r: usize, c: usize) -> u8 {
        self.cells()[r * self.cols() + c]
    }
}

/// An unvalidated rows x cols grid of symbols. Deleting a row and column
/// from a row-Latin square lands here: column repeats are possible, so none
/// of the Latin invariants are claimed.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SymbolGrid {
    rows: usize,
    cols: usize,
    symbols: usize,
    cells: Vec<u8>,
}

impl SymbolGrid {
    pub fn new(rows: usize, cols: usize, symbols: usize, cells: Vec<u8>) -> Result<Self> {
        if symbols > MAX_ORDER {
            return Err(Error::OrderGuard {
                op: "symbol grid",
                max: MAX_ORDER,
                got: symbols,
            });
        }
        if cells.len() != rows * cols {
            return Err(Error::Parse {
                line: 0,
                msg: format!("expected {} cells, got {}", rows * cols, cells.len()),
            });
        }
        for &s in &cells {
            if s as usize >= symbols {
                return Err(Error::IndexOutOfRange {
                    what: "symbol",
                    got: s as usize + 1,
                    max: symbols,
                });
            }
        }
        Ok(SymbolGrid {
            rows,
            cols,
            symbols,
            cells,
        })
    }
}

impl Cells for SymbolGrid {
    fn rows(&self) -> usize {
        self.rows
    }
    fn cols(&self) -> usize {
        self.cols
    }
    fn symbols(&self) -> usize {
        self.symbols
    }
    fn cells(&self) -> &[u8] {
        &self.cells
    }
}

/// A Latin square of order `n`: every row and every column is a permutation
/// of the `n` symbols.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LatinSquare {
    n: usize,
    cells: Vec<u8>,
}

/// A square grid whose rows are permutations of the symbols; columns are
/// unconstrained.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RowLatinSquare {
    n: usize,
    cells: Vec<u8>,
}

/// A rows x cols grid over `symbols` symbols with no repeat in any row or
/// any column. Deleting a row and column of a Latin square lands here.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LatinArray {
    rows: usize,
    cols: usize,
    symbols: usize,
    cells: Vec<u8>,
}

fn check_dims(n: usize) -> Result<()> {
    if n == 0 || n > MAX_ORDER {
        return Err(Error::OrderGuard {
            op: "latin order",
            max: MAX_ORDER,
            got: n,
        });
    }
    Ok(())
}

/// Returns the duplicated symbol, if any, scanning `it` for repeats.
fn first_repeat(it: impl Iterator<Item = u8>) -> Option<u8> {
    let mut seen = 0u64;
    for s in it {
        let bit = 1u64 << s;
        if seen & bit != 0 {
            return Some(s);
        }
        seen |= bit;
    }
    None
}

impl LatinSquare {
    /// Validates that every row and column is a permutation of `0..n`.
    pub fn new(n: usize, cells: Vec<u8>) -> Result<Self> {
        check_dims(n)?;
        if cells.len() != n * n {
            return Err(Error::Parse {
                line: 0,
                msg: format!("expected {} cells, got {}", n * n, cells.len()),
            });
        }
        for &s in &cells {
            if s as usize >= n {
                return Err(Error::IndexOutOfRange {
                    what: "symbol",
                    got: s as usize + 1,
                    max: n,
                });
            }
        }
        for r in 0..n {
            if let Some(s) = first_repeat(cells[r * n..(r + 1) * n].iter().copied()) {
                return Err(Error::DuplicateInRow {
                    row: r + 1,
                    sym: s as usize + 1,
                });
            }
        }
        for c in 0..n {
            if let Some(s) = first_repeat((0..n).map(|r| cells[r * n + c])) {
                return Err(Error::DuplicateInColumn {
                    col: c + 1,
                    sym: s as usize + 1,
                });
            }
        }
        Ok(LatinSquare { n, cells })
    }

    /// 0-based rows-of-symbols constructor.
    pub fn from_rows(rows: &[Vec<u8>]) -> Result<Self> {
        let n = rows.len();
        let mut cells = Vec::with_capacity(n * n);
        for row in rows {
            if row.len() != n {
                return Err(Error::Parse {
                    line: 0,
                    msg: "ragged grid".into(),
                });
            }
            cells.extend_from_slice(row);
        }
        LatinSquare::new(n, cells)
    }

    /// Cayley table of the cyclic group: cell (r, c) holds (r + c) mod n.
    pub fn cyclic(n: usize) -> Self {
        let cells = (0..n)
            .flat_map(|r| (0..n).map(move |c| ((r + c) % n) as u8))
            .collect();
        LatinSquare { n, cells }
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub(crate) fn from_parts_unchecked(n: usize, cells: Vec<u8>) -> Self {
        debug_assert!(LatinSquare::new(n, cells.clone()).is_ok());
        LatinSquare { n, cells }
    }

    /// Applies an `S3` element to the (row, column, symbol) coordinates of
    /// every entry.
    pub fn conjugate(&self, g: S3) -> LatinSquare {
        let n = self.n;
        let mut cells = vec![0u8; n * n];
        for r in 0..n {
            for c in 0..n {
                let s = self.at(r, c) as usize;
                let t = g.apply([r, c, s]);
                cells[t[0] * n + t[1]] = t[2] as u8;
            }
        }
        LatinSquare { n, cells }
    }

    pub fn transpose(&self) -> LatinSquare {
        self.conjugate(S3::TRANSPOSE)
    }

    /// Removes row `r` and column `c` (0-based), leaving an
    /// (n-1) x (n-1) Latin array over the original n symbols.
    pub fn delete(&self, r: usize, c: usize) -> Result<LatinArray> {
        let n = self.n;
        if r >= n {
            return Err(Error::IndexOutOfRange {
                what: "row",
                got: r + 1,
                max: n,
            });
        }
        if c >= n {
            return Err(Error::IndexOutOfRange {
                what: "column",
                got: c + 1,
                max: n,
            });
        }
        let mut cells = Vec::with_capacity((n - 1) * (n - 1));
        for i in (0..n).filter(|&i| i != r) {
            for j in (0..n).filter(|&j| j != c) {
                cells.push(self.at(i, j));
            }
        }
        Ok(LatinArray {
            rows: n - 1,
            cols: n - 1,
            symbols: n,
            cells,
        })
    }

    /// All intercalates (2x2 subsquares on two symbols), ordered
    /// lexicographically by (r1, r2, c1, c2).
    pub fn intercalates(&self) -> Vec<Intercalate> {
        let n = self.n;
        let mut out = Vec::new();
        let mut col_of = vec![0u8; n];
        for r1 in 0..n {
            for r2 in r1 + 1..n {
                for c in 0..n {
                    col_of[self.at(r2, c) as usize] = c as u8;
                }
                for c1 in 0..n {
                    let a = self.at(r1, c1);
                    let c2 = col_of[a as usize] as usize;
                    if c2 <= c1 {
                        continue;
                    }
                    let b = self.at(r1, c2);
                    if self.at(r2, c1) == b {
                        out.push(Intercalate {
                            r1,
                            r2,
                            c1,
                            c2,
                            a,
                            b,
                        });
                    }
                }
            }
        }
        out
    }

    /// Swaps the two symbols of an intercalate, yielding another Latin
    /// square that differs in exactly those four cells. The handle is
    /// accepted in either orientation, so turning twice with the same
    /// handle restores the square.
    pub fn turn(&self, ic: &Intercalate) -> Result<LatinSquare> {
        let Intercalate {
            r1,
            r2,
            c1,
            c2,
            a,
            b,
        } = *ic;
        if !(r1 < r2 && c1 < c2 && r2 < self.n && c2 < self.n) {
            return Err(Error::IntercalateNotPresent);
        }
        let (x, y) = (self.at(r1, c1), self.at(r1, c2));
        let pattern = x != y && self.at(r2, c1) == y && self.at(r2, c2) == x;
        if !pattern || (x, y) != (a, b) && (x, y) != (b, a) {
            return Err(Error::IntercalateNotPresent);
        }
        let mut cells = self.cells.clone();
        let n = self.n;
        cells[r1 * n + c1] = y;
        cells[r1 * n + c2] = x;
        cells[r2 * n + c1] = x;
        cells[r2 * n + c2] = y;
        Ok(LatinSquare { n, cells })
    }

    /// The permutation row -> column traced by symbol `s`.
    pub fn symbol_perm(&self, s: u8) -> Vec<u8> {
        let n = self.n;
        (0..n)
            .map(|r| (0..n).find(|&c| self.at(r, c) == s).unwrap() as u8)
            .collect()
    }

    /// Z2-sums of the parities of the row, column and symbol permutations.
    /// All three are computed independently; no relation between them is
    /// assumed.
    pub fn square_parities(&self) -> SquareParities {
        let n = self.n;
        let mut row = 0u8;
        let mut col = 0u8;
        let mut sym = 0u8;
        for r in 0..n {
            row ^= permutation_parity(&self.cells[r * n..(r + 1) * n]);
        }
        let mut buf = vec![0u8; n];
        for c in 0..n {
            for (r, slot) in buf.iter_mut().enumerate() {
                *slot = self.at(r, c);
            }
            col ^= permutation_parity(&buf);
        }
        for s in 0..n {
            sym ^= permutation_parity(&self.symbol_perm(s as u8));
        }
        SquareParities { row, col, sym }
    }

    /// Parities of the three permutations associated with a transversal.
    pub fn transversal_parities(&self, d: &Diagonal) -> Result<TransversalParities> {
        let n = self.n;
        if d.cols.len() != n || d.weight(self) != n {
            return Err(Error::NotTransversal);
        }
        // sigma_r: row -> column, sigma_c: column -> symbol, sigma_s: symbol -> row
        let mut sigma_c = vec![0u8; n];
        let mut sigma_s = vec![0u8; n];
        for r in 0..n {
            let c = d.cols[r];
            let s = self.at(r, c as usize);
            sigma_c[c as usize] = s;
            sigma_s[s as usize] = r as u8;
        }
        let p = TransversalParities {
            row: permutation_parity(&d.cols),
            col: permutation_parity(&sigma_c),
            sym: permutation_parity(&sigma_s),
        };
        debug_assert_eq!((p.row + p.col + p.sym) % 2, 0);
        Ok(p)
    }

    /// Re-inserts a row and column previously removed by [`delete`];
    /// test support for the deletion round-trip.
    ///
    /// [`delete`]: LatinSquare::delete
    pub fn reinsert(arr: &LatinArray, r: usize, c: usize, row: &[u8], col: &[u8]) -> Result<Self> {
        let n = arr.rows + 1;
        let mut cells = vec![0u8; n * n];
        for i in 0..n {
            cells[i * n + c] = col[i];
        }
        for j in 0..n {
            cells[r * n + j] = row[j];
        }
        let mut it = arr.cells.iter();
        for i in (0..n).filter(|&i| i != r) {
            for j in (0..n).filter(|&j| j != c) {
                cells[i * n + j] = *it.next().unwrap();
            }
        }
        LatinSquare::new(n, cells)
    }

    pub fn to_lsq(&self) -> String {
        let mut s = format!("{}\n", self.n);
        push_grid(&mut s, self.n, self.n, &self.cells);
        s
    }
}

impl Cells for LatinSquare {
    fn rows(&self) -> usize {
        self.n
    }
    fn cols(&self) -> usize {
        self.n
    }
    fn symbols(&self) -> usize {
        self.n
    }
    fn cells(&self) -> &[u8] {
        &self.cells
    }
}

impl RowLatinSquare {
    pub fn new(n: usize, cells: Vec<u8>) -> Result<Self> {
        check_dims(n)?;
        if cells.len() != n * n {
            return Err(Error::Parse {
                line: 0,
                msg: format!("expected {} cells, got {}", n * n, cells.len()),
            });
        }
        for &s in &cells {
            if s as usize >= n {
                return Err(Error::IndexOutOfRange {
                    what: "symbol",
                    got: s as usize + 1,
                    max: n,
                });
            }
        }
        for r in 0..n {
            if let Some(s) = first_repeat(cells[r * n..(r + 1) * n].iter().copied()) {
                return Err(Error::DuplicateInRow {
                    row: r + 1,
                    sym: s as usize + 1,
                });
            }
        }
        Ok(RowLatinSquare { n, cells })
    }

    pub fn order(&self) -> usize {
        self.n
    }

    /// Removes row `r` and column `c`; the result keeps row-distinctness
    /// but columns may repeat, so it is only a [`SymbolGrid`].
    pub fn delete(&self, r: usize, c: usize) -> Result<SymbolGrid> {
        let n = self.n;
        if r >= n || c >= n {
            return Err(Error::IndexOutOfRange {
                what: if r >= n { "row" } else { "column" },
                got: (if r >= n { r } else { c }) + 1,
                max: n,
            });
        }
        let mut cells = Vec::with_capacity((n - 1) * (n - 1));
        for i in (0..n).filter(|&i| i != r) {
            for j in (0..n).filter(|&j| j != c) {
                cells.push(self.at(i, j));
            }
        }
        SymbolGrid::new(n - 1, n - 1, n, cells)
    }

    /// Removes row `r` only, leaving an (n-1) x n row-Latin rectangle.
    pub fn delete_row(&self, r: usize) -> Result<SymbolGrid> {
        let n = self.n;
        if r >= n {
            return Err(Error::IndexOutOfRange {
                what: "row",
                got: r + 1,
                max: n,
            });
        }
        let mut cells = Vec::with_capacity((n - 1) * n);
        for i in (0..n).filter(|&i| i != r) {
            cells.extend_from_slice(&self.cells[i * n..(i + 1) * n]);
        }
        SymbolGrid::new(n - 1, n, n, cells)
    }

    pub fn to_lsq(&self) -> String {
        let mut s = format!("{}\n", self.n);
        push_grid(&mut s, self.n, self.n, &self.cells);
        s
    }
}

impl Cells for RowLatinSquare {
    fn rows(&self) -> usize {
        self.n
    }
    fn cols(&self) -> usize {
        self.n
    }
    fn symbols(&self) -> usize {
        self.n
    }
    fn cells(&self) -> &[u8] {
        &self.cells
    }
}

impl From<LatinSquare> for RowLatinSquare {
    fn from(l: LatinSquare) -> Self {
        RowLatinSquare {
            n: l.n,
            cells: l.cells,
        }
    }
}

impl LatinArray {
    pub fn new(rows: usize, cols: usize, symbols: usize, cells: Vec<u8>) -> Result<Self> {
        if symbols > MAX_ORDER || rows > MAX_ORDER || cols > MAX_ORDER {
            return Err(Error::OrderGuard {
                op: "latin array",
                max: MAX_ORDER,
                got: symbols.max(rows).max(cols),
            });
        }
        if cells.len() != rows * cols {
            return Err(Error::Parse {
                line: 0,
                msg: format!("expected {} cells, got {}", rows * cols, cells.len()),
            });
        }
        for &s in &cells {
            if s as usize >= symbols {
                return Err(Error::IndexOutOfRange {
                    what: "symbol",
                    got: s as usize + 1,
                    max: symbols,
                });
            }
        }
        for r in 0..rows {
            if let Some(s) = first_repeat(cells[r * cols..(r + 1) * cols].iter().copied()) {
                return Err(Error::DuplicateInRow {
                    row: r + 1,
                    sym: s as usize + 1,
                });
            }
        }
        for c in 0..cols {
            if let Some(s) = first_repeat((0..rows).map(|r| cells[r * cols + c])) {
                return Err(Error::DuplicateInColumn {
                    col: c + 1,
                    sym: s as usize + 1,
                });
            }
        }
        Ok(LatinArray {
            rows,
            cols,
            symbols,
            cells,
        })
    }

    pub fn to_lsq(&self) -> String {
        let mut s = format!("{} {} {}\n", self.rows, self.cols, self.symbols);
        push_grid(&mut s, self.rows, self.cols, &self.cells);
        s
    }
}

impl Cells for LatinArray {
    fn rows(&self) -> usize {
        self.rows
    }
    fn cols(&self) -> usize {
        self.cols
    }
    fn symbols(&self) -> usize {
        self.symbols
    }
    fn cells(&self) -> &[u8] {
        &self.cells
    }
}

fn push_grid(out: &mut String, rows: usize, cols: usize, cells: &[u8]) {
    for r in 0..rows {
        for c in 0..cols {
            if c > 0 {
                out.push(' ');
            }
            out.push_str(&(cells[r * cols + c] as usize + 1).to_string());
        }
        out.push('\n');
    }
}

/// A selection of one cell per row with all columns distinct, stored as the
/// row -> column map. Its weight in a square is the number of distinct
/// symbols it picks up.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagonal {
    cols: Vec<u8>,
}

impl Diagonal {
    pub fn new(cols: Vec<u8>) -> Result<Self> {
        let n = cols.len();
        let mut seen = 0u64;
        for &c in &cols {
            if c as usize >= n || seen & (1 << c) != 0 {
                return Err(Error::Parse {
                    line: 0,
                    msg: "diagonal columns must form a permutation".into(),
                });
            }
            seen |= 1 << c;
        }
        Ok(Diagonal { cols })
    }

    pub fn identity(n: usize) -> Self {
        Diagonal {
            cols: (0..n as u8).collect(),
        }
    }

    pub fn cols(&self) -> &[u8] {
        &self.cols
    }

    /// Number of distinct symbols the diagonal selects in `l`.
    pub fn weight(&self, l: &LatinSquare) -> usize {
        let mut seen = 0u64;
        for (r, &c) in self.cols.iter().enumerate() {
            seen |= 1 << l.at(r, c as usize);
        }
        seen.count_ones() as usize
    }
}

/// A 2x2 subsquare on two symbols: rows r1 < r2, columns c1 < c2 holding
/// the pattern [[a, b], [b, a]].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Intercalate {
    pub r1: usize,
    pub r2: usize,
    pub c1: usize,
    pub c2: usize,
    pub a: u8,
    pub b: u8,
}

/// Parities (0 = even, 1 = odd) of the row, column and symbol permutations
/// of a transversal. They always sum to 0 mod 2.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TransversalParities {
    pub row: u8,
    pub col: u8,
    pub sym: u8,
}

/// Z2 row-, column- and symbol-parities of a whole square.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SquareParities {
    pub row: u8,
    pub col: u8,
    pub sym: u8,
}

/// Parity of a permutation given as an image array, via cycle counting.
pub fn permutation_parity(perm: &[u8]) -> u8 {
    let n = perm.len();
    let mut visited = 0u64;
    let mut cycles = 0usize;
    for start in 0..n {
        if visited & (1 << start) != 0 {
            continue;
        }
        cycles += 1;
        let mut i = start;
        while visited & (1 << i) == 0 {
            visited |= 1 << i;
            i = perm[i] as usize;
        }
    }
    ((n - cycles) % 2) as u8
}

/// An element of the symmetric group on the three entry coordinates
/// (row, column, symbol), written so that coordinate `i` of an entry moves
/// to position `self.0[i]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct S3([u8; 3]);

impl S3 {
    pub const IDENTITY: S3 = S3([0, 1, 2]);
    /// (r,c,s) -> (c,r,s): the matrix transpose.
    pub const TRANSPOSE: S3 = S3([1, 0, 2]);
    /// (r,c,s) -> (r,s,c).
    pub const SWAP_COL_SYM: S3 = S3([0, 2, 1]);
    /// (r,c,s) -> (s,c,r).
    pub const SWAP_ROW_SYM: S3 = S3([2, 1, 0]);
    /// (r,c,s) -> (c,s,r). Transversal parity in the image tracks the
    /// column permutation of the preimage.
    pub const ROTATE_LEFT: S3 = S3([2, 0, 1]);
    /// (r,c,s) -> (s,r,c). Transversal parity in the image tracks the
    /// symbol permutation of the preimage.
    pub const ROTATE_RIGHT: S3 = S3([1, 2, 0]);

    pub const ALL: [S3; 6] = [
        S3::IDENTITY,
        S3::TRANSPOSE,
        S3::SWAP_COL_SYM,
        S3::SWAP_ROW_SYM,
        S3::ROTATE_LEFT,
        S3::ROTATE_RIGHT,
    ];

    /// `self` after `other`: applying the result equals applying `other`
    /// first and `self` second.
    pub fn compose(self, other: S3) -> S3 {
        S3([
            self.0[other.0[0] as usize],
            self.0[other.0[1] as usize],
            self.0[other.0[2] as usize],
        ])
    }

    pub fn inverse(self) -> S3 {
        let mut inv = [0u8; 3];
        for i in 0..3 {
            inv[self.0[i] as usize] = i as u8;
        }
        S3(inv)
    }

    pub fn apply(self, triple: [usize; 3]) -> [usize; 3] {
        let mut out = [0usize; 3];
        for i in 0..3 {
            out[self.0[i] as usize] = triple[i];
        }
        out
    }
}

/// Result of [`parse_square`]: the most constrained structure the grid
/// satisfies.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Parsed {
    Latin(LatinSquare),
    RowLatin(RowLatinSquare),
    Array(LatinArray),
}

impl Parsed {
    pub fn class_name(&self) -> &'static str {
        match self {
            Parsed::Latin(_) => "latin-square",
            Parsed::RowLatin(_) => "row-latin-square",
            Parsed::Array(_) => "latin-array",
        }
    }

    pub fn to_lsq(&self) -> String {
        match self {
            Parsed::Latin(l) => l.to_lsq(),
            Parsed::RowLatin(l) => l.to_lsq(),
            Parsed::Array(a) => a.to_lsq(),
        }
    }
}

/// Parses the `.lsq` text format: a header line `n` (square) or `m k n`
/// (array over `n` symbols), then one line of whitespace-separated 1-based
/// symbols per row. Classification is by content: a grid is returned as a
/// Latin square, then a row-Latin square, then a Latin array, whichever is
/// the strongest structure it satisfies.
pub fn parse_square(text: &str) -> Result<Parsed> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty());

    let (hline, header) = lines.next().ok_or(Error::Parse {
        line: 1,
        msg: "empty input".into(),
    })?;
    let dims: Vec<usize> = header
        .split_whitespace()
        .map(|t| {
            t.parse::<usize>().map_err(|_| Error::Parse {
                line: hline,
                msg: format!("bad dimension `{t}`"),
            })
        })
        .collect::<Result<_>>()?;
    let (rows, cols, symbols) = match dims.as_slice() {
        [n] => (*n, *n, *n),
        [m, k, n] => (*m, *k, *n),
        _ => {
            return Err(Error::Parse {
                line: hline,
                msg: "header must be `n` or `m k n`".into(),
            })
        }
    };
    if symbols > MAX_ORDER || rows > MAX_ORDER || cols > MAX_ORDER {
        return Err(Error::Parse {
            line: hline,
            msg: format!("dimensions above {MAX_ORDER} unsupported"),
        });
    }

    let mut cells = Vec::with_capacity(rows * cols);
    let mut last_line = hline;
    for r in 0..rows {
        let (lno, line) = lines.next().ok_or(Error::Parse {
            line: last_line,
            msg: format!("expected {rows} rows, found {r}"),
        })?;
        last_line = lno;
        let toks: Vec<&str> = line.split_whitespace().collect();
        if toks.len() != cols {
            return Err(Error::Parse {
                line: lno,
                msg: format!("ragged grid: expected {cols} entries, got {}", toks.len()),
            });
        }
        for (col, t) in toks.iter().enumerate() {
            let v = t.parse::<i64>().map_err(|_| Error::Parse {
                line: lno,
                msg: format!("column {}: bad symbol `{t}`", col + 1),
            })?;
            if v < 1 || v as usize > symbols {
                return Err(Error::Parse {
                    line: lno,
                    msg: format!("column {}: symbol {v} out of range 1..={symbols}", col + 1),
                });
            }
            cells.push((v - 1) as u8);
        }
    }
    if let Some((lno, _)) = lines.next() {
        return Err(Error::Parse {
            line: lno,
            msg: "trailing rows after grid".into(),
        });
    }

    classify(rows, cols, symbols, cells)
}

fn classify(rows: usize, cols: usize, symbols: usize, cells: Vec<u8>) -> Result<Parsed> {
    let row_dup = (0..rows)
        .find_map(|r| first_repeat(cells[r * cols..(r + 1) * cols].iter().copied()).map(|s| (r, s)));
    let col_dup = (0..cols)
        .find_map(|c| first_repeat((0..rows).map(|r| cells[r * cols + c])).map(|s| (c, s)));
    let square = rows == cols && cols == symbols && rows > 0;

    if square && row_dup.is_none() && col_dup.is_none() {
        return Ok(Parsed::Latin(LatinSquare::new(rows, cells)?));
    }
    if square && row_dup.is_none() {
        return Ok(Parsed::RowLatin(RowLatinSquare::new(rows, cells)?));
    }
    if let Some((r, s)) = row_dup {
        return Err(Error::DuplicateInRow {
            row: r + 1,
            sym: s as usize + 1,
        });
    }
    if let Some((c, s)) = col_dup {
        return Err(Error::DuplicateInColumn {
            col: c + 1,
            sym: s as usize + 1,
        });
    }
    Ok(Parsed::Array(LatinArray::new(rows, cols, symbols, cells)?))
}
