//! Worked examples quoted from the literature: labeled diagrams as text
//! grids, tableaux as text.

use crate::kohnert::LabeledDiagram;
use crate::tableaux::{SetValuedTableau, Tableau};

const D1: &str = "\
...OO.O.
...GG.G.
...OG.G.
...OG...
........
........
........
........
";

const D2: &str = "\
...OO.O.
...GG.G.
...OG.G.
...O..G.
........
........
........
........
";

const E1: &str = "\
...OO.O.
...OG.G.
...GG.G.
...OG...
........
........
........
........
";

fn parse(s: &str) -> LabeledDiagram {
    LabeledDiagram::parse_text(s).expect("fixture grid")
}

/// The two K-Kohnert diagrams of weight (3,3,3,2) for `w = 12365847`.
pub fn ry_counterexample_diagrams() -> Vec<LabeledDiagram> {
    vec![parse(D1), parse(D2)]
}

/// The three diagrams of weight (3,3,3,2) for `w = 12365847` once ghost
/// moves are allowed.
pub fn ghost_counterexample_diagrams() -> Vec<LabeledDiagram> {
    vec![parse(E1), parse(D1), parse(D2)]
}

const BIJECTION_T: &str = "\
1 1 1 . . . . . .
2 2 2 . . . . . .
. . . . . . . . .
. 4 4 . . 432 21 . .
. . . . . . . . .
. . 65 . . 5 543 . .
. . . . . . . . .
. . . . . . . . .
. . . . . . . . .
";

const BIJECTION_IMAGE: &str = "\
OOO...O..
OOO..OG..
.....GO..
.OO..GG..
..O..OG..
..G......
.........
.........
.........
";

const LEFT_KEY_T: &str = "\
1 1 . . . .
2 2 1 . . .
. . . . . .
43 3 3 32 . .
. . . . . .
6 6 65 54 . .
";

const LEFT_KEY_K: &str = "\
1 1 . . . .
2 2 1 . . .
. . . . . .
4 4 4 4 . .
. . . . . .
6 6 6 6 . .
";

/// A flagged set-valued tableau on `D(451829367)`.
pub fn bijection_example_tableau() -> SetValuedTableau {
    SetValuedTableau::parse_text(BIJECTION_T).expect("fixture tableau")
}

/// Its image under the tableau-to-K-Kohnert bijection.
pub fn bijection_example_image() -> LabeledDiagram {
    parse(BIJECTION_IMAGE)
}

/// A set-valued tableau on `D(2,3,0,4,0,4)`.
pub fn left_key_example_tableau() -> SetValuedTableau {
    SetValuedTableau::parse_text(LEFT_KEY_T).expect("fixture tableau")
}

/// The left key of [`left_key_example_tableau`].
pub fn left_key_example_key() -> Tableau {
    let t = SetValuedTableau::parse_text(LEFT_KEY_K).expect("fixture tableau");
    t.max_tableau().expect("single-valued")
}
