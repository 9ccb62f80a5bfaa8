//! A fixed set of small knot and link diagrams used by tests and benches.

use super::{braid_to_pd, parse_pd, PDCode};

#[derive(Debug, Clone)]
pub struct NamedDiagram {
    pub name: String,
    pub pd: PDCode,
}

impl NamedDiagram {
    fn braid(name: &str, word: &[i32], strands: usize) -> Self {
        NamedDiagram {
            name: name.to_string(),
            pd: braid_to_pd(word, strands).expect("catalog braid is valid"),
        }
    }

    fn pd(name: &str, text: &str) -> Self {
        NamedDiagram {
            name: name.to_string(),
            pd: parse_pd(text).expect("catalog PD is valid"),
        }
    }
}

const KNOT_BRAIDS: &[(&str, &[i32], usize)] = &[
    ("3_1", &[1, 1, 1], 2),
    ("4_1", &[1, -2, 1, -2], 3),
    ("5_1", &[1, 1, 1, 1, 1], 2),
    ("5_2", &[1, 1, 1, 2, -1, 2], 3),
    ("6_1", &[1, 1, 2, -1, -3, 2, -3], 4),
    ("6_2", &[1, 1, 1, -2, 1, -2], 3),
    ("6_3", &[1, 1, -2, 1, -2, -2], 3),
    ("7_1", &[1, 1, 1, 1, 1, 1, 1], 2),
    ("7_3", &[1, 1, 1, 1, 1, 2, -1, 2], 3),
    ("7_5", &[1, 1, 1, 1, 2, -1, 2, 2], 3),
    ("7_7", &[1, -2, 1, -2, 3, -2, 3], 4),
    ("8_19", &[1, 1, 1, 2, 1, 1, 1, 2], 3),
    ("8_20", &[1, 1, 1, -2, -1, -1, -1, -2], 3),
    ("10_124", &[1, 1, 1, 1, 1, 2, 1, 1, 1, 2], 3),
];

const LINK_BRAIDS: &[(&str, &[i32], usize)] = &[
    ("hopf", &[1, 1], 2),
    ("T(2,4)", &[1, 1, 1, 1], 2),
    ("T(2,6)", &[1, 1, 1, 1, 1, 1], 2),
    ("whitehead", &[1, 1, -2, 1, -2], 3),
    ("borromean", &[1, -2, 1, -2, 1, -2], 3),
    ("unlink-2", &[1, -1], 2),
    ("trefoil-split-unknot", &[1, 1, 1], 3),
];

/// Knots from knot tables as braid closures, named by their table entry.
pub fn knot_diagrams() -> Vec<NamedDiagram> {
    let mut out: Vec<NamedDiagram> = KNOT_BRAIDS
        .iter()
        .map(|(n, w, s)| NamedDiagram::braid(n, w, *s))
        .collect();
    out.push(NamedDiagram::pd("3_1-table", "X[1,4,2,5];X[3,6,4,1];X[5,2,6,3]"));
    out.push(NamedDiagram::pd(
        "4_1-table",
        "X[4,2,5,1];X[8,6,1,5];X[6,3,7,4];X[2,7,3,8]",
    ));
    out.push(NamedDiagram::pd(
        "5_2-table",
        "X[1,4,2,5];X[3,8,4,9];X[5,10,6,1];X[9,6,10,7];X[7,2,8,3]",
    ));
    out.push(NamedDiagram::braid("unknot-kink", &[1], 2));
    out.push(NamedDiagram::braid("unknot-2", &[1, -2], 3));
    out.push(NamedDiagram {
        name: "unknot".into(),
        pd: PDCode::unknot(),
    });
    out
}

/// Multi-component links.
pub fn link_diagrams() -> Vec<NamedDiagram> {
    let mut out: Vec<NamedDiagram> = LINK_BRAIDS
        .iter()
        .map(|(n, w, s)| NamedDiagram::braid(n, w, *s))
        .collect();
    out.push(NamedDiagram {
        name: "unlink-0".into(),
        pd: PDCode::unlink(2),
    });
    out
}

/// Knots and links together with the mirror of every chiral-looking entry.
pub fn test_diagrams() -> Vec<NamedDiagram> {
    let mut out = knot_diagrams();
    out.extend(link_diagrams());
    let mirrors: Vec<NamedDiagram> = out
        .iter()
        .filter(|d| d.pd.writhe() != 0)
        .map(|d| NamedDiagram {
            name: format!("{}-mirror", d.name),
            pd: d.pd.mirror(),
        })
        .collect();
    out.extend(mirrors);
    out
}
