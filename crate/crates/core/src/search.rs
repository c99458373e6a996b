//! Corpus generation and randomized search: exhaustive reduced squares of
//! small order, seeded random squares via the +-1 incidence-cube walk, a
//! residue-targeting walk over intercalate turns, and the sixteen-class
//! coverage experiment for even orders.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::claims::Subject;
use crate::error::{Error, Result};
use crate::fixtures;
use crate::latin::{Intercalate, LatinSquare};
use crate::spectrum::{count_transversals, parity_type_counts, t_table};

/// Exhaustive generation is held to orders whose reduced census is
/// enumerable in reasonable time.
pub const MAX_EXHAUSTIVE_ORDER: usize = 7;

/// Lazily yields every reduced Latin square of order `n` (first row and
/// first column in natural order) exactly once, in lexicographic order of
/// the row-major cell list.
pub struct ReducedSquares {
    n: usize,
    grid: Vec<u8>,
    row_used: Vec<u64>,
    col_used: Vec<u64>,
    /// Symbol currently placed at each free cell, or -1.
    tried: Vec<i16>,
    pos: usize,
    total: usize,
    state: IterState,
}

enum IterState {
    Fresh,
    Resume,
    Done,
}

pub fn exhaustive_reduced(n: usize) -> Result<ReducedSquares> {
    if n == 0 || n > MAX_EXHAUSTIVE_ORDER {
        return Err(Error::OrderGuard {
            op: "exhaustive_reduced",
            max: MAX_EXHAUSTIVE_ORDER,
            got: n,
        });
    }
    let mut grid = vec![0u8; n * n];
    let mut row_used = vec![0u64; n];
    let mut col_used = vec![0u64; n];
    for c in 0..n {
        grid[c] = c as u8;
        col_used[c] = 1 << c;
    }
    for r in 0..n {
        grid[r * n] = r as u8;
        row_used[r] = 1 << r;
    }
    row_used[0] = mask(n);
    col_used[0] = mask(n);
    let total = (n - 1) * (n - 1);
    Ok(ReducedSquares {
        n,
        grid,
        row_used,
        col_used,
        tried: vec![-1; total.max(1)],
        pos: 0,
        total,
        state: IterState::Fresh,
    })
}

fn mask(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

impl ReducedSquares {
    fn cell(&self, pos: usize) -> (usize, usize) {
        (1 + pos / (self.n - 1), 1 + pos % (self.n - 1))
    }

    fn remove(&mut self, pos: usize) {
        let (r, c) = self.cell(pos);
        let s = self.tried[pos] as u8;
        self.grid[r * self.n + c] = 0;
        self.row_used[r] &= !(1 << s);
        self.col_used[c] &= !(1 << s);
    }

    fn place(&mut self, pos: usize, s: u8) {
        let (r, c) = self.cell(pos);
        self.grid[r * self.n + c] = s;
        self.row_used[r] |= 1 << s;
        self.col_used[c] |= 1 << s;
        self.tried[pos] = s as i16;
    }
}

impl Iterator for ReducedSquares {
    type Item = LatinSquare;

    fn next(&mut self) -> Option<LatinSquare> {
        match self.state {
            IterState::Done => return None,
            IterState::Fresh => self.state = IterState::Resume,
            IterState::Resume => {
                if self.total == 0 {
                    self.state = IterState::Done;
                    return None;
                }
                self.pos -= 1;
                self.remove(self.pos);
            }
        }
        loop {
            if self.pos == self.total {
                return Some(LatinSquare::from_parts_unchecked(self.n, self.grid.clone()));
            }
            let (r, c) = self.cell(self.pos);
            let free = mask(self.n) & !(self.row_used[r] | self.col_used[c]);
            let from = (self.tried[self.pos] + 1) as usize;
            let mut placed = false;
            for s in from..self.n {
                if free >> s & 1 == 1 {
                    self.place(self.pos, s as u8);
                    self.pos += 1;
                    if self.pos < self.total {
                        self.tried[self.pos] = -1;
                    }
                    placed = true;
                    break;
                }
            }
            if !placed {
                self.tried[self.pos] = -1;
                if self.pos == 0 {
                    self.state = IterState::Done;
                    return None;
                }
                self.pos -= 1;
                self.remove(self.pos);
            }
        }
    }
}

/// Tuning for the random-square walk.
#[derive(Debug, Clone, Copy)]
pub struct WalkConfig {
    /// Burn-in moves as a multiple of n^3.
    pub burn_in_factor: usize,
}

impl Default for WalkConfig {
    fn default() -> Self {
        WalkConfig { burn_in_factor: 10 }
    }
}

/// A seeded random Latin square: starting from the cyclic square, perform
/// `burn_in_factor * n^3` +-1 moves on the incidence cube (passing through
/// improper states), then walk on until the cube is proper again.
pub fn random_square(n: usize, seed: u64) -> LatinSquare {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_square_with(n, &mut rng, WalkConfig::default())
}

pub fn random_square_with(n: usize, rng: &mut impl Rng, cfg: WalkConfig) -> LatinSquare {
    assert!(n >= 1, "order must be positive");
    if n == 1 {
        return LatinSquare::cyclic(1);
    }
    let mut cube = IncidenceCube::from(&LatinSquare::cyclic(n));
    let burn_in = cfg.burn_in_factor * n * n * n;
    for _ in 0..burn_in {
        cube.step(rng);
    }
    while cube.improper.is_some() {
        cube.step(rng);
    }
    cube.to_square()
}

/// The 0-1 incidence cube of a Latin square, with at most one -1 entry
/// while a walk is passing through an improper state.
struct IncidenceCube {
    n: usize,
    cells: Vec<i8>,
    improper: Option<(usize, usize, usize)>,
}

impl IncidenceCube {
    fn from(l: &LatinSquare) -> Self {
        use crate::latin::Cells;
        let n = l.order();
        let mut cells = vec![0i8; n * n * n];
        for r in 0..n {
            for c in 0..n {
                cells[(r * n + c) * n + l.at(r, c) as usize] = 1;
            }
        }
        IncidenceCube {
            n,
            cells,
            improper: None,
        }
    }

    fn at(&self, r: usize, c: usize, s: usize) -> i8 {
        self.cells[(r * self.n + c) * self.n + s]
    }

    fn add(&mut self, r: usize, c: usize, s: usize, v: i8) {
        let n = self.n;
        self.cells[(r * n + c) * n + s] += v;
    }

    /// One +-1 move. From a proper state, pick a random zero cell; from an
    /// improper state, resolve the -1 cell along one of its 2x2x2 flips.
    fn step(&mut self, rng: &mut impl Rng) {
        let n = self.n;
        let (r, c, s) = match self.improper {
            None => loop {
                let r = rng.random_range(0..n);
                let c = rng.random_range(0..n);
                let s = rng.random_range(0..n);
                if self.at(r, c, s) == 0 {
                    break (r, c, s);
                }
            },
            Some(cell) => cell,
        };
        // the lines through (r,c,*), (r,*,s), (*,c,s) carry one 1 when the
        // state is proper and two when (r,c,s) is the -1 cell
        let s2 = self.pick_line(rng, |i| self.at(r, c, i));
        let c2 = self.pick_line(rng, |i| self.at(r, i, s));
        let r2 = self.pick_line(rng, |i| self.at(i, c, s));

        self.add(r, c, s, 1);
        self.add(r, c2, s2, 1);
        self.add(r2, c, s2, 1);
        self.add(r2, c2, s, 1);
        self.add(r, c, s2, -1);
        self.add(r, c2, s, -1);
        self.add(r2, c, s, -1);
        self.add(r2, c2, s2, -1);
        self.improper = (self.at(r2, c2, s2) < 0).then_some((r2, c2, s2));
    }

    /// Uniform choice among the cells of a line holding a positive entry;
    /// proper lines hold one, the lines through a -1 cell hold two.
    fn pick_line(&self, rng: &mut impl Rng, get: impl Fn(usize) -> i8) -> usize {
        let mut found = [0usize; 2];
        let mut cnt = 0;
        for i in 0..self.n {
            if get(i) == 1 {
                found[cnt] = i;
                cnt += 1;
            }
        }
        debug_assert!(cnt == 1 || cnt == 2);
        if cnt == 1 {
            found[0]
        } else {
            found[rng.random_range(0..2)]
        }
    }

    fn to_square(&self) -> LatinSquare {
        let n = self.n;
        let mut cells = vec![0u8; n * n];
        for r in 0..n {
            for c in 0..n {
                let s = (0..n).find(|&s| self.at(r, c, s) == 1).unwrap();
                cells[r * n + c] = s as u8;
            }
        }
        LatinSquare::from_parts_unchecked(n, cells)
    }
}

/// Result of a residue-targeting search.
#[derive(Debug, Clone, Serialize)]
pub struct SearchResult {
    pub target: u64,
    pub modulus: u64,
    pub steps: u64,
    pub outcome: SearchOutcome,
}

#[derive(Debug, Clone, Serialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum SearchOutcome {
    /// A square whose transversal count hits the requested residue, with
    /// the turn sequence that produces it from the start square.
    Found {
        square: String,
        transversals: u64,
        turns: Vec<TurnRecord>,
    },
    /// Budget exhausted; says nothing about impossibility.
    Exhausted,
    /// The residue class is ruled out by a parity theorem for this order.
    Excluded { reason: String },
}

/// One accepted intercalate turn, 1-based for serialization.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct TurnRecord {
    pub r1: usize,
    pub r2: usize,
    pub c1: usize,
    pub c2: usize,
    pub a: usize,
    pub b: usize,
}

impl From<Intercalate> for TurnRecord {
    fn from(ic: Intercalate) -> Self {
        TurnRecord {
            r1: ic.r1 + 1,
            r2: ic.r2 + 1,
            c1: ic.c1 + 1,
            c2: ic.c2 + 1,
            a: ic.a as usize + 1,
            b: ic.b as usize + 1,
        }
    }
}

/// Tuning for [`residue_search`]: the walk restarts from the start square
/// after `budget / stagnation_divisor` consecutive steps without a new
/// residue class.
#[derive(Debug, Clone, Copy)]
pub struct SearchConfig {
    pub stagnation_divisor: u64,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            stagnation_divisor: 10,
        }
    }
}

/// Random walk over intercalate turns, hunting a square with transversal
/// count congruent to `k` mod `m`. A hit is replayed from the start
/// square and recounted before being reported.
pub fn residue_search(
    start: &LatinSquare,
    k: u64,
    m: u64,
    budget: u64,
    seed: u64,
) -> Result<SearchResult> {
    residue_search_with(start, k, m, budget, seed, SearchConfig::default())
}

pub fn residue_search_with(
    start: &LatinSquare,
    k: u64,
    m: u64,
    budget: u64,
    seed: u64,
    cfg: SearchConfig,
) -> Result<SearchResult> {
    if m < 2 || k >= m || m > 1 << 20 {
        return Err(Error::IndexOutOfRange {
            what: "target residue",
            got: k as usize,
            max: m as usize,
        });
    }
    if budget == 0 {
        return Err(Error::EmptyBudget);
    }
    let n = start.order();
    if let Some(reason) = excluded_by_theorem(n, k, m) {
        return Ok(SearchResult {
            target: k,
            modulus: m,
            steps: 0,
            outcome: SearchOutcome::Excluded { reason },
        });
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let stagnation = (budget / cfg.stagnation_divisor.max(1)).max(1);
    let mut cur = start.clone();
    let mut turns: Vec<Intercalate> = Vec::new();
    let mut seen_residues = vec![false; m as usize];
    let mut last_new = 0u64;

    for step in 0..=budget {
        let count = count_transversals(&cur);
        let residue = count % m;
        if !seen_residues[residue as usize] {
            seen_residues[residue as usize] = true;
            last_new = step;
        }
        if residue == k {
            return Ok(verified_hit(start, &cur, &turns, count, k, m, step));
        }
        if step == budget {
            break;
        }
        if step - last_new >= stagnation {
            cur = start.clone();
            turns.clear();
            last_new = step;
        }
        let ics = cur.intercalates();
        if ics.is_empty() {
            if turns.is_empty() {
                // nowhere to move from the start square
                return Ok(SearchResult {
                    target: k,
                    modulus: m,
                    steps: step,
                    outcome: SearchOutcome::Exhausted,
                });
            }
            cur = start.clone();
            turns.clear();
            continue;
        }
        let ic = ics[rng.random_range(0..ics.len())];
        cur = cur.turn(&ic).unwrap();
        turns.push(ic);
    }
    Ok(SearchResult {
        target: k,
        modulus: m,
        steps: budget,
        outcome: SearchOutcome::Exhausted,
    })
}

fn verified_hit(
    start: &LatinSquare,
    cur: &LatinSquare,
    turns: &[Intercalate],
    count: u64,
    k: u64,
    m: u64,
    step: u64,
) -> SearchResult {
    // replay the recorded turns and recount before reporting
    let mut replay = start.clone();
    for ic in turns {
        replay = replay.turn(ic).expect("recorded turn must apply");
    }
    assert_eq!(&replay, cur, "turn log must reproduce the hit");
    let recount = count_transversals(&replay);
    assert_eq!(recount, count);
    assert_eq!(recount % m, k);
    SearchResult {
        target: k,
        modulus: m,
        steps: step,
        outcome: SearchOutcome::Found {
            square: cur.to_lsq(),
            transversals: count,
            turns: turns.iter().copied().map(TurnRecord::from).collect(),
        },
    }
}

/// The two parity theorems that rule residue classes out entirely:
/// even order forces an even count, and order 2 mod 4 forces a multiple
/// of 4.
pub fn excluded_by_theorem(n: usize, k: u64, m: u64) -> Option<String> {
    fn gcd(a: u64, b: u64) -> u64 {
        if b == 0 {
            a
        } else {
            gcd(b, a % b)
        }
    }
    if n % 2 == 0 && k % gcd(2, m) != 0 {
        return Some(format!(
            "even order {n} forces an even transversal count; {k} mod {m} is odd-only"
        ));
    }
    if n % 4 == 2 && k % gcd(4, m) != 0 {
        return Some(format!(
            "order {n} = 2 mod 4 forces a count divisible by 4; {k} mod {m} is unreachable"
        ));
    }
    None
}

/// Witness square for one (w, E_{n-1}/2, pi_r, pi_c) parity class.
#[derive(Debug, Clone, Serialize)]
pub struct ClassWitness {
    pub square: String,
    pub w: u64,
    pub e_n1: u64,
    pub class: [u8; 4],
}

#[derive(Debug, Serialize)]
pub struct SixteenClasses {
    pub order: usize,
    pub samples_used: u64,
    pub witnesses: Vec<Option<ClassWitness>>,
}

impl SixteenClasses {
    pub fn found(&self) -> usize {
        self.witnesses.iter().flatten().count()
    }

    pub fn all_found(&self) -> bool {
        self.found() == 16
    }
}

/// The mod-2 class of a square: (w, E_{n-1}/2, pi_r, pi_c), all mod 2.
pub fn parity_class(l: &LatinSquare) -> [u8; 4] {
    let n = l.order();
    let types = parity_type_counts(l);
    let e_n = types.total();
    let sum_t: u64 = t_table(l).iter().sum();
    // sum of the deletion table = n E_n + 2 E_{n-1}
    let e_n1 = (sum_t - n as u64 * e_n) / 2;
    assert_eq!(e_n1 % 2, 0, "E_{{n-1}} must be even");
    let p = l.square_parities();
    [
        (types.w % 2) as u8,
        ((e_n1 / 2) % 2) as u8,
        p.row,
        p.col,
    ]
}

/// Samples seeded random squares of even order `n` until every one of the
/// sixteen (w, E_{n-1}/2, pi_r, pi_c) mod-2 classes has a witness, or the
/// sample budget runs out.
pub fn sixteen_class_search(n: usize, seed: u64, budget: u64) -> Result<SixteenClasses> {
    if n % 2 != 0 || n < 2 {
        return Err(Error::OrderGuard {
            op: "sixteen_class_search (even orders only)",
            max: usize::MAX,
            got: n,
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut witnesses: Vec<Option<ClassWitness>> = vec![None; 16];
    let mut found = 0;
    let mut samples = 0;
    while samples < budget && found < 16 {
        samples += 1;
        let square = random_square_with(n, &mut rng, WalkConfig::default());
        let class = parity_class(&square);
        let idx = (class[0] << 3 | class[1] << 2 | class[2] << 1 | class[3]) as usize;
        if witnesses[idx].is_none() {
            let types = parity_type_counts(&square);
            let sum_t: u64 = t_table(&square).iter().sum();
            let e_n1 = (sum_t - n as u64 * types.total()) / 2;
            witnesses[idx] = Some(ClassWitness {
                square: square.to_lsq(),
                w: types.w,
                e_n1,
                class,
            });
            found += 1;
        }
    }
    Ok(SixteenClasses {
        order: n,
        samples_used: samples,
        witnesses,
    })
}

/// A reproducible stream of claim subjects.
#[derive(Debug, Clone)]
pub enum Corpus {
    /// Every reduced square of order n, exactly once.
    ExhaustiveReduced { n: usize },
    /// Seed-reproducible random squares.
    Random { n: usize, count: usize, seed: u64 },
    /// The embedded reference squares.
    Fixtures,
}

impl Corpus {
    pub fn subjects(&self) -> Result<Box<dyn Iterator<Item = Subject> + Send>> {
        match *self {
            Corpus::ExhaustiveReduced { n } => {
                let it = exhaustive_reduced(n)?;
                Ok(Box::new(it.map(Subject::Latin)))
            }
            Corpus::Random { n, count, seed } => {
                let it = (0..count as u64).map(move |i| {
                    Subject::Latin(random_square(n, seed.wrapping_add(i)))
                });
                Ok(Box::new(it))
            }
            Corpus::Fixtures => {
                let items: Vec<Subject> = vec![
                    Subject::Latin(fixtures::order9()),
                    Subject::Latin(fixtures::order10()),
                    Subject::Latin(fixtures::order11()),
                    Subject::Latin(fixtures::l5()),
                    Subject::RowLatin(fixtures::row_latin2()),
                    Subject::RowLatin(fixtures::row_latin6()),
                ];
                Ok(Box::new(items.into_iter()))
            }
        }
    }
}

/// Looks up a fixture by name and returns it when it is a Latin square.
pub fn fixture_square(name: &str) -> Option<LatinSquare> {
    let f = fixtures::by_name(name)?;
    match crate::latin::parse_square(f.lsq).ok()? {
        crate::latin::Parsed::Latin(l) => Some(l),
        _ => None,
    }
}
