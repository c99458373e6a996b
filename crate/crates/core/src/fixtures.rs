//! Reference squares used by the test suites, the residue search and the
//! CLI: three Latin squares of orders 9-11 that are rich in intercalates,
//! a square of order 5 whose sole deleted-corner transversal certifies a
//! transversal of the full square, and two row-Latin squares (orders 2 and
//! 6) whose transversal counts are not multiples of 4.

use crate::error::Result;
use crate::latin::{parse_square, LatinSquare, Parsed, RowLatinSquare};

#[derive(Debug, Clone, Copy)]
pub struct Fixture {
    pub name: &'static str,
    pub lsq: &'static str,
}

pub const ORDER9: &str = "9
1 2 3 4 5 6 7 8 9
2 1 4 3 6 5 9 7 8
3 6 1 8 7 9 5 2 4
4 3 5 6 9 7 8 1 2
5 4 2 9 8 1 6 3 7
6 9 7 5 3 8 2 4 1
7 8 9 1 2 3 4 5 6
8 5 6 7 4 2 1 9 3
9 7 8 2 1 4 3 6 5
";

pub const ORDER10: &str = "10
1 2 3 4 5 6 7 8 9 10
2 1 4 3 6 5 8 7 10 9
3 6 5 7 2 8 10 9 4 1
4 5 6 8 7 9 2 10 1 3
5 8 7 9 1 10 4 3 2 6
6 4 8 10 9 7 1 2 3 5
7 3 10 5 8 1 9 4 6 2
8 7 9 6 10 2 3 1 5 4
9 10 1 2 3 4 5 6 7 8
10 9 2 1 4 3 6 5 8 7
";

pub const ORDER11: &str = "11
1 2 3 4 5 6 7 8 9 10 11
2 1 4 3 6 5 8 7 11 9 10
3 8 1 6 7 10 11 9 4 5 2
4 11 2 8 9 7 5 10 1 3 6
5 3 6 10 8 9 1 2 7 11 4
6 4 7 9 10 11 2 3 8 1 5
7 5 8 11 4 2 10 1 3 6 9
8 7 9 5 11 1 6 4 10 2 3
9 10 11 1 2 3 4 5 6 7 8
10 6 5 7 3 8 9 11 2 4 1
11 9 10 2 1 4 3 6 5 8 7
";

/// Every transversal of this square passes through the cell (2, 1)
/// (1-based), yet deleting row 1 and column 1 leaves exactly one
/// transversal: the main diagonal of the remainder.
pub const L5: &str = "5
1 2 3 4 5
2 1 4 5 3
3 4 5 1 2
4 5 2 3 1
5 3 1 2 4
";

pub const ROW_LATIN2: &str = "2
1 2
1 2
";

pub const ROW_LATIN6: &str = "6
1 3 6 2 5 4
2 1 5 6 4 3
3 2 4 1 5 6
4 2 1 5 6 3
5 2 3 6 1 4
6 5 2 3 4 1
";

pub const FIXTURES: [Fixture; 6] = [
    Fixture {
        name: "order9",
        lsq: ORDER9,
    },
    Fixture {
        name: "order10",
        lsq: ORDER10,
    },
    Fixture {
        name: "order11",
        lsq: ORDER11,
    },
    Fixture {
        name: "L5",
        lsq: L5,
    },
    Fixture {
        name: "rowlatin2",
        lsq: ROW_LATIN2,
    },
    Fixture {
        name: "rowlatin6",
        lsq: ROW_LATIN6,
    },
];

pub fn by_name(name: &str) -> Option<Fixture> {
    FIXTURES.iter().copied().find(|f| f.name == name)
}

fn latin(text: &str) -> LatinSquare {
    match parse_square(text).expect("fixture parses") {
        Parsed::Latin(l) => l,
        other => panic!("fixture is a {}, expected Latin square", other.class_name()),
    }
}

fn row_latin(text: &str) -> RowLatinSquare {
    match parse_square(text).expect("fixture parses") {
        Parsed::RowLatin(l) => l,
        other => panic!(
            "fixture is a {}, expected row-Latin square",
            other.class_name()
        ),
    }
}

pub fn order9() -> LatinSquare {
    latin(ORDER9)
}

pub fn order10() -> LatinSquare {
    latin(ORDER10)
}

pub fn order11() -> LatinSquare {
    latin(ORDER11)
}

pub fn l5() -> LatinSquare {
    latin(L5)
}

pub fn row_latin2() -> RowLatinSquare {
    row_latin(ROW_LATIN2)
}

pub fn row_latin6() -> RowLatinSquare {
    row_latin(ROW_LATIN6)
}

/// Writes all fixtures as `.lsq` files into `dir`.
pub fn emit_all(dir: &std::path::Path) -> Result<Vec<std::path::PathBuf>> {
    std::fs::create_dir_all(dir).map_err(io_err)?;
    let mut out = Vec::new();
    for f in FIXTURES {
        let path = dir.join(format!("{}.lsq", f.name));
        std::fs::write(&path, f.lsq).map_err(io_err)?;
        out.push(path);
    }
    Ok(out)
}

fn io_err(e: std::io::Error) -> crate::error::Error {
    crate::error::Error::Parse {
        line: 0,
        msg: format!("io error: {e}"),
    }
}
