//! Rebuilds `data/golden_table.json` from explicit blow-up recipes.
//!
//! Each recipe starts from F2 with C a double section and the listed
//! fibres, and blows up the named centres in order. The numbers attached
//! to each row are reference values, entered by hand; nothing here is
//! computed from them.
//!
//!     cargo run -p delpezzo-core --example regen_golden > crates/core/data/golden_table.json

use std::collections::BTreeMap;

use delpezzo::graph::{DualGraph, VertexRole};
use delpezzo::pair::FibreMark;
use delpezzo::rational::{parse, Rational};
use delpezzo::table::{BoundaryRecord, ClassificationTable, ComplementRecord, RelationRecord, TableRow};

struct Recipe {
    id: u32,
    s_c: &'static str,
    fibres: u32,
    /// `(centre, fibre, name of the new curve)`.
    steps: &'static [(&'static [&'static str], u32, &'static str)],
    names: &'static [(&'static str, &'static str)],
    options: Vec<Opt>,
    relations: &'static [(&'static str, &'static str)],
    flags: &'static [&'static str],
}

struct Opt {
    b1: &'static [(&'static str, &'static str)],
    max_b: &'static str,
    complements: Vec<(u32, &'static [(&'static str, &'static str)])>,
    crepant: &'static [(&'static str, &'static str)],
    flags: &'static [&'static str],
}

fn opt(
    b1: &'static [(&'static str, &'static str)],
    max_b: &'static str,
    complements: Vec<(u32, &'static [(&'static str, &'static str)])>,
) -> Opt {
    Opt { b1, max_b, complements, crepant: &[], flags: &[] }
}

fn fractions(m: &[(&str, &str)]) -> BTreeMap<String, Rational> {
    m.iter().map(|(l, q)| (l.to_string(), parse(q).unwrap())).collect()
}

const TANGENT: [(&[&str], u32, &str); 2] = [(&["C", "F0"], 0, "G1"), (&["C", "F0", "G1"], 0, "G2")];

fn build(r: &Recipe) -> TableRow {
    let mut g = DualGraph::new();
    let c = g.add_vertex("C", 8, 1, false, VertexRole::BoundaryCurveC).unwrap();
    let s = g.add_vertex("Sigma", -2, 0, false, VertexRole::MinimalSection).unwrap();
    let mut fib = BTreeMap::from([
        ("C".to_string(), FibreMark::Multisection),
        ("Sigma".to_string(), FibreMark::Section),
    ]);
    for i in 0..r.fibres {
        let f = g.add_vertex(&format!("F{i}"), 0, 0, false, VertexRole::Fibre).unwrap();
        g.add_edge(s, f, 1).unwrap();
        g.add_edge(c, f, 2).unwrap();
        fib.insert(format!("F{i}"), FibreMark::InFibre(i));
    }
    for (centre, fibre, name) in r.steps {
        let ids: Vec<_> = centre.iter().map(|l| g.find(l).unwrap()).collect();
        let (h, e) = g.blow_up_subgraph(&ids).unwrap();
        g = h.relabelled(&BTreeMap::from([(e, name.to_string())])).unwrap();
        fib.insert(name.to_string(), FibreMark::InFibre(*fibre));
    }
    for (old, new) in r.names {
        let v = g.find(old).unwrap();
        g = g.relabelled(&BTreeMap::from([(v, new.to_string())])).unwrap();
        g.set_role(v, VertexRole::BoundaryComponent(new[1..].parse().unwrap())).unwrap();
        let mark = fib.remove(*old).unwrap();
        fib.insert(new.to_string(), mark);
    }
    TableRow {
        id: r.id,
        s_c_label: r.s_c.to_string(),
        c2: g.weight(c),
        graph: g.to_record(),
        fibration: fib,
        boundary_options: r
            .options
            .iter()
            .map(|o| BoundaryRecord {
                b1: fractions(o.b1),
                max_b: parse(o.max_b).unwrap(),
                complements: o
                    .complements
                    .iter()
                    .map(|(n, m)| ComplementRecord {
                        n: *n,
                        coefficients: fractions(m),
                        crepant: fractions(o.crepant),
                    })
                    .collect(),
                flags: o.flags.iter().map(|s| s.to_string()).collect(),
            })
            .collect(),
        relations: r
            .relations
            .iter()
            .map(|(d, q)| RelationRecord { divisor: d.to_string(), fraction: parse(q).unwrap() })
            .collect(),
        moves: Vec::new(),
        provenance: provenance(r),
        flags: r.flags.iter().map(|s| s.to_string()).collect(),
    }
}

fn provenance(r: &Recipe) -> String {
    let steps: Vec<String> = r.steps.iter().map(|(c, _, n)| format!("{}<-{}", n, c.join("*"))).collect();
    let pins: Vec<&str> = r.relations.iter().map(|(d, _)| *d).collect();
    format!(
        "F2 with {} fibre(s); blow-ups {}; pinned by max_b, complements and the relations for {}",
        r.fibres,
        if steps.is_empty() { "none".to_string() } else { steps.join(", ") },
        pins.join(", ")
    )
}

macro_rules! steps {
    ($($x:expr),* $(,)?) => {{
        const S: &[(&[&str], u32, &str)] = &[$($x),*];
        S
    }};
}

fn recipes() -> Vec<Recipe> {
    let c7 = |c2: &'static str| -> Vec<(u32, &'static [(&'static str, &'static str)])> {
        let m: &'static [(&str, &str)] = match c2 {
            "1/7" => &[("C", "6/7"), ("C2", "1/7")],
            "2/7" => &[("C", "6/7"), ("C2", "2/7")],
            "3/7" => &[("C", "6/7"), ("C2", "3/7")],
            "4/7" => &[("C", "6/7"), ("C2", "4/7")],
            "5/7" => &[("C", "6/7"), ("C2", "5/7")],
            "6/7" => &[("C", "6/7"), ("C2", "6/7")],
            _ => unreachable!(),
        };
        vec![(7, m)]
    };
    let with = |mut v: Vec<(u32, &'static [(&'static str, &'static str)])>,
                n: u32,
                m: &'static [(&'static str, &'static str)]| {
        v.push((n, m));
        v
    };
    let half: &[(&str, &str)] = &[("C2", "1/2")];
    vec![
        Recipe {
            id: 1,
            s_c: "Q2",
            fibres: 1,
            steps: steps![],
            names: &[("F0", "C2")],
            options: vec![opt(half, "7/8", with(c7("4/7"), 8, &[("C", "7/8"), ("C2", "1/2")]))],
            relations: &[("-K", "2"), ("C", "2"), ("C2", "1/2")],
            flags: &[],
        },
        Recipe {
            id: 2,
            s_c: "S7",
            fibres: 1,
            steps: steps![(&["C", "F0"], 0, "G1"), (&["F0", "G1"], 0, "G2")],
            names: &[],
            options: vec![Opt {
                b1: &[],
                max_b: "6/7",
                complements: vec![(7, &[("C", "6/7")])],
                crepant: &[("G1", "3/7"), ("F0", "4/7"), ("Sigma", "2/7")],
                flags: &[],
            }],
            relations: &[("-K", "1"), ("C", "7/6")],
            flags: &[],
        },
        Recipe {
            id: 3,
            s_c: "A1+A2",
            fibres: 1,
            steps: steps![TANGENT[0], TANGENT[1]],
            names: &[("G2", "C2")],
            options: vec![
                Opt {
                    flags: &["max_b recomputed from the graph is 11/12"],
                    ..opt(half, "9/10", vec![(10, &[("C", "9/10"), ("C2", "1/2")])])
                },
                opt(&[("C2", "2/3")], "8/9", vec![(9, &[("C", "8/9"), ("C2", "2/3")])]),
                opt(&[("C2", "3/4")], "7/8", vec![(8, &[("C", "7/8"), ("C2", "3/4")])]),
                opt(&[("C2", "4/5")], "13/15", c7("6/7")),
                opt(&[("C2", "5/6")], "31/36", c7("6/7")),
            ],
            relations: &[("-K", "1"), ("C", "1"), ("C2", "1/6")],
            flags: &[],
        },
        Recipe {
            id: 4,
            s_c: "A1+A2",
            fibres: 1,
            steps: steps![TANGENT[0], TANGENT[1], (&["G2", "G1"], 0, "G3")],
            names: &[("G3", "C2")],
            options: vec![opt(&[], "8/9", with(c7("2/7"), 9, &[("C", "8/9")]))],
            relations: &[("-K", "8/12"), ("C", "9/12"), ("C2", "1/12")],
            flags: &[],
        },
        Recipe {
            id: 5,
            s_c: "A1+A2",
            fibres: 1,
            steps: steps![TANGENT[0], TANGENT[1], (&["G2", "F0"], 0, "G3")],
            names: &[("G3", "C2")],
            options: vec![opt(&[], "9/10", with(c7("3/7"), 10, &[("C", "9/10")]))],
            relations: &[("-K", "9/15"), ("C", "10/15"), ("C2", "1/15")],
            flags: &[],
        },
        Recipe {
            id: 6,
            s_c: "A1+A2",
            fibres: 1,
            steps: steps![TANGENT[0], TANGENT[1], (&["G2", "F0"], 0, "G3"), (&["G3", "G2"], 0, "G4")],
            names: &[("G4", "C2")],
            options: vec![opt(&[], "7/8", with(c7("2/7"), 8, &[("C", "7/8")]))],
            relations: &[("-K", "14/40"), ("C", "16/40"), ("C2", "1/40")],
            flags: &[],
        },
        Recipe {
            id: 7,
            s_c: "A1+A2",
            fibres: 1,
            steps: steps![TANGENT[0], TANGENT[1], (&["G2", "G1"], 0, "G3"), (&["G3", "G2"], 0, "G4")],
            names: &[("G4", "C2")],
            options: vec![opt(&[], "13/15", c7("1/7"))],
            relations: &[("-K", "13/35"), ("C", "15/35"), ("C2", "1/35")],
            flags: &[],
        },
        Recipe {
            id: 8,
            s_c: "A1+A2",
            fibres: 1,
            steps: steps![
                TANGENT[0],
                TANGENT[1],
                (&["G2", "F0"], 0, "G3"),
                (&["G3", "G2"], 0, "G4"),
                (&["G4", "G2"], 0, "G5"),
            ],
            names: &[("G5", "C2")],
            options: vec![opt(&[], "19/22", c7("1/7"))],
            relations: &[("-K", "19/77"), ("C", "22/77"), ("C2", "1/77")],
            flags: &[],
        },
        Recipe {
            id: 9,
            s_c: "A4",
            fibres: 1,
            steps: steps![TANGENT[0], TANGENT[1], (&["C", "G2"], 0, "G3")],
            names: &[("G3", "C2")],
            options: vec![
                opt(half, "9/10", with(c7("5/7"), 10, &[("C", "9/10"), ("C2", "1/2")])),
                opt(&[("C2", "2/3")], "13/15", c7("5/7")),
            ],
            relations: &[("-K", "1"), ("C", "1"), ("C2", "1/5")],
            flags: &[],
        },
        Recipe {
            id: 10,
            s_c: "A4",
            fibres: 1,
            steps: steps![TANGENT[0], TANGENT[1], (&["C", "G2"], 0, "G3"), (&["G3", "G2"], 0, "G4")],
            names: &[("G4", "C2")],
            options: vec![
                opt(&[], "10/11", with(c7("4/7"), 11, &[("C", "10/11")])),
                opt(half, "19/22", c7("4/7")),
            ],
            relations: &[("-K", "10/22"), ("C", "11/22"), ("C2", "1/22")],
            flags: &[],
        },
        Recipe {
            id: 11,
            s_c: "A4",
            fibres: 1,
            steps: steps![
                TANGENT[0],
                TANGENT[1],
                (&["C", "G2"], 0, "G3"),
                (&["G3", "G2"], 0, "G4"),
                (&["G4", "G2"], 0, "G5"),
            ],
            names: &[("G5", "C2")],
            options: vec![opt(&[], "15/17", c7("3/7"))],
            relations: &[("-K", "15/51"), ("C", "17/51"), ("C2", "1/51")],
            flags: &[],
        },
        Recipe {
            id: 12,
            s_c: "A4",
            fibres: 1,
            steps: steps![
                TANGENT[0],
                TANGENT[1],
                (&["C", "G2"], 0, "G3"),
                (&["G3", "G2"], 0, "G4"),
                (&["G4", "G3"], 0, "G5"),
            ],
            names: &[("G5", "C2")],
            options: vec![opt(&[], "7/8", with(c7("2/7"), 8, &[("C", "7/8")]))],
            relations: &[("-K", "14/48"), ("C", "16/48"), ("C2", "1/48")],
            flags: &[],
        },
        Recipe {
            id: 13,
            s_c: "A4",
            fibres: 1,
            steps: steps![
                TANGENT[0],
                TANGENT[1],
                (&["C", "G2"], 0, "G3"),
                (&["G3", "G2"], 0, "G4"),
                (&["G4", "G2"], 0, "G5"),
                (&["G5", "G2"], 0, "G6"),
            ],
            names: &[("G6", "C2")],
            options: vec![opt(&[], "20/23", c7("2/7"))],
            relations: &[("-K", "20/92"), ("C", "1/4"), ("C2", "1/92")],
            flags: &[],
        },
        Recipe {
            id: 14,
            s_c: "A4",
            fibres: 1,
            steps: steps![
                TANGENT[0],
                TANGENT[1],
                (&["C", "G2"], 0, "G3"),
                (&["G3", "G2"], 0, "G4"),
                (&["G4", "G2"], 0, "G5"),
                (&["G5", "G2"], 0, "G6"),
                (&["G6", "G2"], 0, "G7"),
            ],
            names: &[("G7", "C2")],
            options: vec![opt(&[], "25/29", c7("1/7"))],
            relations: &[("-K", "25/145"), ("C", "1/5"), ("C2", "1/145")],
            flags: &[],
        },
        Recipe {
            id: 15,
            s_c: "D5",
            fibres: 1,
            steps: steps![TANGENT[0], TANGENT[1], (&["C", "G2"], 0, "G3"), (&["C", "G3"], 0, "G4")],
            names: &[("G4", "C2")],
            options: vec![opt(half, "7/8", with(c7("4/7"), 8, &[("C", "7/8"), ("C2", "1/2")]))],
            relations: &[("-K", "1"), ("C", "1"), ("C2", "1/4")],
            flags: &[],
        },
        Recipe {
            id: 16,
            s_c: "D5",
            fibres: 1,
            steps: steps![
                TANGENT[0],
                TANGENT[1],
                (&["C", "G2"], 0, "G3"),
                (&["C", "G3"], 0, "G4"),
                (&["G4", "G3"], 0, "G5"),
            ],
            names: &[("G5", "C2")],
            options: vec![opt(&[], "8/9", with(c7("2/7"), 9, &[("C", "8/9")]))],
            relations: &[("-K", "8/18"), ("C", "9/18"), ("C2", "1/18")],
            flags: &[],
        },
        Recipe {
            id: 17,
            s_c: "2A1+A3",
            fibres: 2,
            steps: steps![TANGENT[0], TANGENT[1], (&["C", "F1"], 1, "H1"), (&["C", "F1", "H1"], 1, "H2")],
            names: &[("G2", "C2")],
            options: vec![opt(half, "7/8", with(c7("4/7"), 8, &[("C", "7/8"), ("C2", "1/2")]))],
            relations: &[("-K", "1"), ("C", "1"), ("C2", "1/4")],
            flags: &[],
        },
        Recipe {
            id: 18,
            s_c: "2A1+A3",
            fibres: 2,
            steps: steps![
                TANGENT[0],
                TANGENT[1],
                (&["C", "F1"], 1, "H1"),
                (&["C", "F1", "H1"], 1, "H2"),
                (&["G2", "F0"], 0, "G3"),
            ],
            names: &[("H2", "C2"), ("G3", "C3")],
            options: vec![opt(&[], "6/7", vec![(7, &[("C", "6/7")])])],
            relations: &[("-K", "12/42"), ("C", "14/42"), ("C2", "3/42"), ("C3", "2/42")],
            flags: &[],
        },
        Recipe {
            id: 19,
            s_c: "E6",
            fibres: 1,
            steps: steps![
                TANGENT[0],
                TANGENT[1],
                (&["C", "G2"], 0, "G3"),
                (&["C", "G3"], 0, "G4"),
                (&["C", "G4"], 0, "G5"),
                (&["G5", "G4"], 0, "G6"),
            ],
            names: &[("G6", "C2")],
            options: vec![opt(&[], "6/7", vec![(7, &[("C", "6/7")])])],
            relations: &[("-K", "6/14"), ("C", "7/14"), ("C2", "1/14")],
            flags: &["G2 has log discrepancy exactly 1/7, so two divisors reach 1/7"],
        },
        Recipe {
            id: 20,
            s_c: "A1+A5",
            fibres: 2,
            steps: steps![
                TANGENT[0],
                TANGENT[1],
                (&["C", "F1"], 1, "H1"),
                (&["C", "F1", "H1"], 1, "H2"),
                (&["C", "G2"], 0, "G3"),
                (&["G3", "G2"], 0, "G4"),
            ],
            names: &[("H2", "C2"), ("G4", "C3")],
            options: vec![opt(&[], "6/7", vec![(7, &[("C", "6/7")])])],
            relations: &[("-K", "6/14"), ("C", "7/14"), ("C2", "2/14"), ("C3", "1/14")],
            flags: &[],
        },
    ]
}

fn main() {
    let table = ClassificationTable { rows: recipes().iter().map(build).collect() };
    print!("{}", table.to_json());
}
