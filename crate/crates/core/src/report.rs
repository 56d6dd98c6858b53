//! JSON documents emitted by the command-line tool, and the serialization
//! conventions shared with library types: indices are 1-based, addresses
//! are lists of 1-based letters, exact coordinates are `"p/q"` strings.

use serde::ser::{SerializeStruct, Serializer};
use serde::Serialize;

use crate::arcs::ArcApproximation;
use crate::attractor::{Address, AddressedPoint};
use crate::geometry::{IntersectionKind, Point2, Rational};
use crate::holder::{HolderCertificate, TurningReport, WordStretchReport};
use crate::io::format_rational;
use crate::polysys::{Arithmetic, GraphNode, GraphWitness, ValidationReport};

pub const TOOL: &str = "dendrify";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

pub(crate) fn one_based<S: Serializer>(v: &usize, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_u64(*v as u64 + 1)
}

pub(crate) fn one_based_pair<S: Serializer>(v: &(usize, usize), s: S) -> Result<S::Ok, S::Error> {
    [v.0 + 1, v.1 + 1].serialize(s)
}

pub(crate) fn one_based_list<S: Serializer>(v: &[usize], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|k| k + 1))
}

impl Serialize for Address {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        one_based_list(self.letters(), s)
    }
}

impl Serialize for AddressedPoint {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("AddressedPoint", 2)?;
        st.serialize_field("address", &self.address)?;
        st.serialize_field("vertex", &(self.vertex + 1))?;
        st.end()
    }
}

/// Exact point as `["p/q", "p/q"]`.
#[derive(Clone, Debug, PartialEq)]
pub struct ExactPoint(pub Point2<Rational>);

impl Serialize for ExactPoint {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        [format_rational(&self.0.x), format_rational(&self.0.y)].serialize(s)
    }
}

#[derive(Serialize)]
struct Header<'a> {
    name: &'static str,
    version: &'static str,
    command: &'a str,
}

fn header(command: &str) -> Header<'_> {
    Header {
        name: TOOL,
        version: VERSION,
        command,
    }
}

#[derive(Serialize)]
struct ConditionDoc<T: Serialize> {
    passed: bool,
    #[serde(flatten)]
    detail: T,
}

#[derive(Serialize)]
struct ViolationDoc {
    pair: [usize; 2],
    kind: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    point: Option<ExactPoint>,
}

#[derive(Serialize)]
struct ConnectionDoc {
    pair: [usize; 2],
    point: ExactPoint,
}

#[derive(Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
enum WitnessDoc {
    Cycle { nodes: Vec<String> },
    Disconnected { components: Vec<Vec<String>> },
}

fn node_label(n: &GraphNode) -> String {
    match n {
        GraphNode::Polygon(i) => format!("P{}", i + 1),
        GraphNode::Point(k) => format!("A{}", k + 1),
    }
}

#[derive(Serialize)]
struct GraphDoc {
    polygon_nodes: usize,
    point_nodes: Vec<ExactPoint>,
    /// `[copy, point]`, 1-based.
    edges: Vec<[usize; 2]>,
}

#[derive(Serialize)]
struct ValidationDoc<'a> {
    tool: Header<'a>,
    file: &'a str,
    arithmetic: Arithmetic,
    maps: usize,
    vertices: usize,
    condition1: ConditionDoc<serde_json::Value>,
    condition2: ConditionDoc<serde_json::Value>,
    condition3: ConditionDoc<serde_json::Value>,
    condition4: Option<ConditionDoc<serde_json::Value>>,
    connection_points: Vec<ConnectionDoc>,
    graph: Option<GraphDoc>,
    passed: bool,
}

fn to_value<T: Serialize>(v: T) -> serde_json::Value {
    serde_json::to_value(v).expect("serializable")
}

fn pair(i: usize, j: usize) -> [usize; 2] {
    [i + 1, j + 1]
}

/// Summary of a system's validation, as a pretty-printed JSON document.
pub fn validation_document(
    file: &str,
    arithmetic: Arithmetic,
    maps: usize,
    vertices: usize,
    rep: &ValidationReport,
) -> String {
    let c1 = ConditionDoc {
        passed: rep.condition1.passed,
        detail: to_value(serde_json::json!({
            "failing_maps": rep.condition1.failing_maps.iter().map(|i| i + 1).collect::<Vec<_>>()
        })),
    };
    let c2 = ConditionDoc {
        passed: rep.condition2.passed,
        detail: to_value(serde_json::json!({
            "uncovered_vertices":
                rep.condition2.uncovered_vertices.iter().map(|i| i + 1).collect::<Vec<_>>()
        })),
    };
    let violations: Vec<ViolationDoc> = rep
        .condition3
        .violations
        .iter()
        .map(|v| ViolationDoc {
            pair: pair(v.i, v.j),
            kind: v.kind.label(),
            point: match &v.kind {
                IntersectionKind::SinglePoint(p) => Some(ExactPoint(p.clone())),
                _ => None,
            },
        })
        .collect();
    let c3 = ConditionDoc {
        passed: rep.condition3.passed,
        detail: to_value(serde_json::json!({ "violations": violations })),
    };
    let c4 = rep.condition4.as_ref().map(|c| ConditionDoc {
        passed: c.passed,
        detail: to_value(serde_json::json!({
            "witness": c.witness.as_ref().map(|w| match w {
                GraphWitness::Cycle(nodes) => WitnessDoc::Cycle {
                    nodes: nodes.iter().map(node_label).collect(),
                },
                GraphWitness::Disconnected { components } => WitnessDoc::Disconnected {
                    components: components
                        .iter()
                        .map(|c| c.iter().map(node_label).collect())
                        .collect(),
                },
            })
        })),
    });
    let doc = ValidationDoc {
        tool: header("validate"),
        file,
        arithmetic,
        maps,
        vertices,
        condition1: c1,
        condition2: c2,
        condition3: c3,
        condition4: c4,
        connection_points: rep
            .connection_points()
            .iter()
            .map(|cp| ConnectionDoc {
                pair: pair(cp.i, cp.j),
                point: ExactPoint(cp.point.clone()),
            })
            .collect(),
        graph: rep.graph.as_ref().map(|g| GraphDoc {
            polygon_nodes: g.polygon_count(),
            point_nodes: g.points().iter().cloned().map(ExactPoint).collect(),
            edges: g.edges().iter().map(|&(i, k)| pair(i, k)).collect(),
        }),
        passed: rep.passed,
    };
    pretty(&doc)
}

#[derive(Serialize)]
struct CertificateDoc<'a> {
    tool: Header<'a>,
    file: &'a str,
    certificate: &'a HolderCertificate,
    /// `C · diam(P)^{1−λ}`: the constant for the input coordinates.
    c_original_coordinates: f64,
}

pub fn certificate_document(file: &str, cert: &HolderCertificate) -> String {
    pretty(&CertificateDoc {
        tool: header("certify"),
        file,
        certificate: cert,
        c_original_coordinates: cert.denormalized_constant(),
    })
}

#[derive(Serialize)]
struct VerifyDoc<'a> {
    tool: Header<'a>,
    file: &'a str,
    certificate: &'a HolderCertificate,
    bounded_turning: &'a TurningReport,
    word_stretch: &'a WordStretchReport,
}

pub fn verification_document(
    file: &str,
    cert: &HolderCertificate,
    turning: &TurningReport,
    word_stretch: &WordStretchReport,
) -> String {
    pretty(&VerifyDoc {
        tool: header("verify"),
        file,
        certificate: cert,
        bounded_turning: turning,
        word_stretch,
    })
}

#[derive(Serialize)]
struct ArcDoc<'a> {
    x: &'a AddressedPoint,
    y: &'a AddressedPoint,
    depth: usize,
    coincident: bool,
    chain: &'a [Address],
    junctions: &'a [AddressedPoint],
    junction_points: &'a [Point2],
    x_point: &'a Point2,
    y_point: &'a Point2,
    diam_lower: f64,
    diam_upper: f64,
}

impl<'a> From<&'a ArcApproximation> for ArcDoc<'a> {
    fn from(a: &'a ArcApproximation) -> Self {
        ArcDoc {
            x: &a.x,
            y: &a.y,
            depth: a.depth,
            coincident: a.coincident,
            chain: &a.chain,
            junctions: &a.junctions,
            junction_points: &a.junction_points,
            x_point: &a.x_point,
            y_point: &a.y_point,
            diam_lower: a.diam_lower,
            diam_upper: a.diam_upper,
        }
    }
}

#[derive(Serialize)]
struct RenderDoc<'a> {
    tool: Header<'a>,
    file: &'a str,
    output: &'a str,
    depth: usize,
    cells: usize,
    arc: Option<ArcDoc<'a>>,
}

/// Summary of a rendered SVG, with the highlighted arc if any.
pub fn render_document(
    file: &str,
    output: &str,
    depth: usize,
    cells: usize,
    arc: Option<&ArcApproximation>,
) -> String {
    pretty(&RenderDoc {
        tool: header("render"),
        file,
        output,
        depth,
        cells,
        arc: arc.map(ArcDoc::from),
    })
}

fn pretty<T: Serialize>(doc: &T) -> String {
    let mut s = serde_json::to_string_pretty(doc).expect("serializable");
    s.push('\n');
    s
}
