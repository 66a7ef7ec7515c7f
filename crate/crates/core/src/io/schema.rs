//! Instance files: strict JSON with exact rationals written as `"p/q"` strings.

use std::collections::BTreeMap;
use std::fmt;

use serde::de::{self, Deserializer, Visitor};
use serde::{Deserialize, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::formulas::{
    AlphaPolicy, Cc3Evidence, Member, Mode, Monotonicity, QcEvaluator, SGrid, SmoothQCMember, SublevelOracleQC,
    SupFamily,
};
use crate::functions::{
    AffinePiece, ExtendedFunction, ImproperFunction, Piece1D, PolyhedralFunction, Polynomial, QuasiConvex1D,
};
use crate::geometry::{HalfSpace, PolyhedronH};
use crate::num::{format_rational, parse_rational, ExtValue, Rational, Vector};
use crate::optimality::{IndexFamily, LinearSipInstance, ProgramInstance, QcProgram, Qualification};

pub const SCHEMA_VERSION: u32 = 1;

/// An exact rational that travels as a string.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Q(pub Rational);

impl Serialize for Q {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(&self.0))
    }
}

impl<'de> Deserialize<'de> for Q {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        struct V;
        impl Visitor<'_> for V {
            type Value = Q;
            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("a rational string \"p\" or \"p/q\"")
            }
            fn visit_str<E: de::Error>(self, s: &str) -> std::result::Result<Q, E> {
                parse_rational(s).map(Q).map_err(|e| E::custom(bare(e)))
            }
        }
        d.deserialize_str(V)
    }
}

/// `+inf` or a rational.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QExt(pub ExtValue);

impl Serialize for QExt {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.0.to_string())
    }
}

impl<'de> Deserialize<'de> for QExt {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        match s.trim() {
            "+inf" => Ok(QExt(ExtValue::PosInf)),
            "-inf" => Err(de::Error::custom("-inf is not an admissible value")),
            t => parse_rational(t)
                .map(|q| QExt(ExtValue::Finite(q)))
                .map_err(|e| de::Error::custom(bare(e))),
        }
    }
}

/// The message without the variant prefix; the caller adds its own.
fn bare(e: Error) -> String {
    match e {
        Error::Input(m) => m,
        other => other.to_string(),
    }
}

fn qs(v: &Vector) -> Vec<Q> {
    v.coords().iter().cloned().map(Q).collect()
}

fn vector(field: &str, dim: usize, xs: &[Q]) -> Result<Vector> {
    if xs.len() != dim {
        return Err(Error::Input(format!("{field}: expected {dim} coordinates, found {}", xs.len())));
    }
    Ok(Vector::new(xs.iter().map(|q| q.0.clone()).collect()))
}

/// `⟨normal, x⟩ ≤ offset`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HalfSpaceSpec {
    pub normal: Vec<Q>,
    pub offset: Q,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PieceSpec {
    pub slope: Vec<Q>,
    pub intercept: Q,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub enum Piece1DSpec {
    Affine { slope: Q, intercept: Q },
    PosInf,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Qc1DSpec {
    pub breakpoints: Vec<Q>,
    pub pieces: Vec<Piece1DSpec>,
    pub values: Vec<QExt>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DirectionSpec {
    Increasing,
    Decreasing,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum MemberSpec {
    Affine {
        id: String,
        slope: Vec<Q>,
        intercept: Q,
    },
    MaxAffine {
        id: String,
        pieces: Vec<PieceSpec>,
        #[serde(default, skip_serializing_if = "Vec::is_empty")]
        domain: Vec<HalfSpaceSpec>,
    },
    ImproperDomain {
        id: String,
        domain: Vec<HalfSpaceSpec>,
    },
    /// `q(⟨a, x⟩ + b)`.
    QcSublevel {
        id: String,
        a: Vec<Q>,
        b: Q,
        q: Qc1DSpec,
    },
    /// `p(⟨a, x⟩ + b)` with polynomial coefficients in increasing degree.
    SmoothQc {
        id: String,
        a: Vec<Q>,
        b: Q,
        polynomial: Vec<Q>,
        root: Q,
        direction: DirectionSpec,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum GridSpec {
    Geometric { base: Q, min_exp: i32, max_exp: i32 },
    Values { values: Vec<Q> },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ModeSpec {
    ExactAffine,
    Sampled,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub enum AlphaSpec {
    Rho,
    Ones,
    Custom(BTreeMap<String, Q>),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ObjectiveSpec {
    pub pieces: Vec<PieceSpec>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub domain: Vec<HalfSpaceSpec>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum QualificationSpec {
    F0ContinuousAt { point: Vec<Q> },
    InteriorMeetsDomF0 { point: Vec<Q> },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum EvidenceSpec {
    Checked,
    ContinuousAt { point: Vec<Q> },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RowSpec {
    pub a: Vec<Q>,
    pub b: Q,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum SamplerSpec {
    Finite { rows: Vec<RowSpec> },
    Circle { radius: Q, span: Q, shift: Q, levels: Vec<u32> },
}

/// One instance. Commands read the fields they need and reject missing ones.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    pub version: u32,
    pub id: String,
    pub dim: usize,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub members: Vec<MemberSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub point: Option<Vec<Q>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub epsilon: Vec<Q>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub s_grid: Option<GridSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mode: Option<ModeSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<AlphaSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub objective: Option<ObjectiveSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub qualification: Option<QualificationSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cc3_evidence: Option<EvidenceSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cost: Option<Vec<Q>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sampler: Option<SamplerSpec>,
}

/// Parses an instance file; errors carry the JSON path of the offending field.
pub fn parse_instance(text: &str) -> Result<InstanceFile> {
    let de = &mut serde_json::Deserializer::from_str(text);
    let file: InstanceFile = serde_path_to_error::deserialize(de).map_err(|e| {
        let mut path = e.path().to_string();
        // Tagged members are buffered before decoding, which hides the
        // inner field; recover it by scanning the member's numeric strings.
        if let Some(inner) = member_index(&path).and_then(|i| bad_rational_in_member(text, i)) {
            path = format!("{path}.{inner}");
        }
        Error::Input(format!("at {path}: {}", e.into_inner()))
    })?;
    if file.version != SCHEMA_VERSION {
        return Err(Error::Input(format!(
            "at version: unsupported schema version {} (expected {SCHEMA_VERSION})",
            file.version
        )));
    }
    if file.dim == 0 {
        return Err(Error::Input("at dim: the dimension must be positive".into()));
    }
    Ok(file)
}

fn member_index(path: &str) -> Option<usize> {
    path.strip_prefix("members[")?.strip_suffix(']')?.parse().ok()
}

/// Path (relative to the member) of the first string that is not a rational.
fn bad_rational_in_member(text: &str, index: usize) -> Option<String> {
    fn walk(v: &serde_json::Value, path: String) -> Option<String> {
        match v {
            serde_json::Value::String(s) => (s.trim() != "+inf" && parse_rational(s.trim()).is_err()).then_some(path),
            serde_json::Value::Array(xs) => xs.iter().enumerate().find_map(|(i, x)| walk(x, format!("{path}[{i}]"))),
            serde_json::Value::Object(m) => m
                .iter()
                .filter(|(k, _)| !matches!(k.as_str(), "kind" | "id" | "direction"))
                .find_map(|(k, x)| walk(x, if path.is_empty() { k.clone() } else { format!("{path}.{k}") })),
            _ => None,
        }
    }
    let root: serde_json::Value = serde_json::from_str(text).ok()?;
    walk(root.get("members")?.get(index)?, String::new())
}

/// Canonical text: pretty JSON, rationals in lowest terms, trailing newline.
pub fn print_instance(file: &InstanceFile) -> String {
    let mut s = serde_json::to_string_pretty(file).expect("instance files serialize");
    s.push('\n');
    s
}

impl HalfSpaceSpec {
    pub fn from_model(h: &HalfSpace) -> Self {
        HalfSpaceSpec {
            normal: qs(&h.normal),
            offset: Q(h.offset.clone()),
        }
    }
}

impl PieceSpec {
    pub fn from_model(p: &AffinePiece) -> Self {
        PieceSpec {
            slope: qs(&p.slope),
            intercept: Q(p.intercept.clone()),
        }
    }

    fn to_model(&self, field: &str, dim: usize) -> Result<AffinePiece> {
        Ok(AffinePiece::new(
            vector(&format!("{field}.slope"), dim, &self.slope)?,
            self.intercept.0.clone(),
        ))
    }
}

fn domain_spec(p: &PolyhedronH) -> Vec<HalfSpaceSpec> {
    if p.is_marked_empty() {
        // 0 ≤ −1.
        return vec![HalfSpaceSpec {
            normal: vec![Q(Rational::from_integer(0.into())); p.dim()],
            offset: Q(Rational::from_integer((-1).into())),
        }];
    }
    p.constraints().iter().map(HalfSpaceSpec::from_model).collect()
}

fn domain_model(field: &str, dim: usize, rows: &[HalfSpaceSpec]) -> Result<PolyhedronH> {
    let hs = rows
        .iter()
        .enumerate()
        .map(|(i, h)| {
            Ok(HalfSpace::new(
                vector(&format!("{field}[{i}].normal"), dim, &h.normal)?,
                h.offset.0.clone(),
            ))
        })
        .collect::<Result<Vec<_>>>()?;
    PolyhedronH::new(dim, hs)
}

fn pieces_model(field: &str, dim: usize, pieces: &[PieceSpec]) -> Result<Vec<AffinePiece>> {
    if pieces.is_empty() {
        return Err(Error::Input(format!("{field}: at least one piece is required")));
    }
    pieces
        .iter()
        .enumerate()
        .map(|(i, p)| p.to_model(&format!("{field}[{i}]"), dim))
        .collect()
}

fn polyhedral_spec(id: &str, f: &PolyhedralFunction) -> MemberSpec {
    match f.as_global_affine() {
        Some(a) => MemberSpec::Affine {
            id: id.to_string(),
            slope: qs(&a.slope),
            intercept: Q(a.intercept.clone()),
        },
        None => MemberSpec::MaxAffine {
            id: id.to_string(),
            pieces: f.pieces().iter().map(PieceSpec::from_model).collect(),
            domain: domain_spec(f.domain()),
        },
    }
}

fn qc1d_spec(q: &QuasiConvex1D) -> Qc1DSpec {
    Qc1DSpec {
        breakpoints: q.breakpoints().iter().cloned().map(Q).collect(),
        pieces: q
            .pieces()
            .iter()
            .map(|p| match p {
                Piece1D::Affine { slope, intercept } => Piece1DSpec::Affine {
                    slope: Q(slope.clone()),
                    intercept: Q(intercept.clone()),
                },
                Piece1D::PosInf => Piece1DSpec::PosInf,
            })
            .collect(),
        values: q.values().iter().cloned().map(QExt).collect(),
    }
}

impl MemberSpec {
    pub fn id(&self) -> &str {
        match self {
            MemberSpec::Affine { id, .. }
            | MemberSpec::MaxAffine { id, .. }
            | MemberSpec::ImproperDomain { id, .. }
            | MemberSpec::QcSublevel { id, .. }
            | MemberSpec::SmoothQc { id, .. } => id,
        }
    }

    pub fn from_member(m: &Member) -> Self {
        match &m.f {
            ExtendedFunction::Proper(p) => polyhedral_spec(&m.id, p),
            ExtendedFunction::Improper(i) => MemberSpec::ImproperDomain {
                id: m.id.clone(),
                domain: domain_spec(i.domain()),
            },
        }
    }

    pub fn from_qc(id: &str, e: &QcEvaluator) -> Self {
        match e {
            QcEvaluator::Polyhedral(p) => polyhedral_spec(id, p),
            QcEvaluator::Composite { q, a, b } => MemberSpec::QcSublevel {
                id: id.to_string(),
                a: qs(a),
                b: Q(b.clone()),
                q: qc1d_spec(q),
            },
            QcEvaluator::Smooth(s) => MemberSpec::SmoothQc {
                id: id.to_string(),
                a: qs(s.a()),
                b: Q(s.b().clone()),
                polynomial: s.polynomial().coeffs().iter().cloned().map(Q).collect(),
                root: Q(s.root().clone()),
                direction: match s.direction() {
                    Monotonicity::Increasing => DirectionSpec::Increasing,
                    Monotonicity::Decreasing => DirectionSpec::Decreasing,
                },
            },
        }
    }

    fn polyhedral(&self, field: &str, dim: usize) -> Result<Option<PolyhedralFunction>> {
        Ok(match self {
            MemberSpec::Affine { slope, intercept, .. } => Some(PolyhedralFunction::affine(
                vector(&format!("{field}.slope"), dim, slope)?,
                intercept.0.clone(),
            )),
            MemberSpec::MaxAffine { pieces, domain, .. } => Some(PolyhedralFunction::new(
                pieces_model(&format!("{field}.pieces"), dim, pieces)?,
                domain_model(&format!("{field}.domain"), dim, domain)?,
            )?),
            _ => None,
        })
    }

    fn to_member(&self, field: &str, dim: usize) -> Result<Member> {
        if let Some(p) = self.polyhedral(field, dim)? {
            return Ok(Member::new(self.id(), p));
        }
        match self {
            MemberSpec::ImproperDomain { id, domain } => Ok(Member::new(
                id.clone(),
                ImproperFunction::new(domain_model(&format!("{field}.domain"), dim, domain)?)
                    .map_err(|e| Error::Input(format!("{field}: {e}")))?,
            )),
            _ => Err(Error::Input(format!(
                "{field}: quasi-convex members are not allowed in a convex family"
            ))),
        }
    }

    fn to_qc(&self, field: &str, dim: usize) -> Result<(String, QcEvaluator)> {
        if let Some(p) = self.polyhedral(field, dim)? {
            return Ok((self.id().to_string(), QcEvaluator::Polyhedral(p)));
        }
        let wrap = |e: Error| Error::Input(format!("{field}: {e}"));
        match self {
            MemberSpec::QcSublevel { id, a, b, q } => {
                let pieces = q
                    .pieces
                    .iter()
                    .map(|p| match p {
                        Piece1DSpec::Affine { slope, intercept } => Piece1D::affine(slope.0.clone(), intercept.0.clone()),
                        Piece1DSpec::PosInf => Piece1D::PosInf,
                    })
                    .collect();
                let q = QuasiConvex1D::new(
                    q.breakpoints.iter().map(|b| b.0.clone()).collect(),
                    pieces,
                    q.values.iter().map(|v| v.0.clone()).collect(),
                )
                .map_err(wrap)?;
                let e = QcEvaluator::composite(q, vector(&format!("{field}.a"), dim, a)?, b.0.clone()).map_err(wrap)?;
                Ok((id.clone(), e))
            }
            MemberSpec::SmoothQc {
                id,
                a,
                b,
                polynomial,
                root,
                direction,
            } => {
                let p = Polynomial::new(polynomial.iter().map(|c| c.0.clone()).collect());
                let dir = match direction {
                    DirectionSpec::Increasing => Monotonicity::Increasing,
                    DirectionSpec::Decreasing => Monotonicity::Decreasing,
                };
                let s = SmoothQCMember::new(vector(&format!("{field}.a"), dim, a)?, b.0.clone(), p, root.0.clone(), dir)
                    .map_err(wrap)?;
                Ok((id.clone(), QcEvaluator::Smooth(s)))
            }
            _ => Err(Error::Input(format!(
                "{field}: improper members are not allowed in a quasi-convex family"
            ))),
        }
    }
}

impl InstanceFile {
    pub fn new(id: impl Into<String>, dim: usize) -> Self {
        InstanceFile {
            version: SCHEMA_VERSION,
            id: id.into(),
            dim,
            members: vec![],
            point: None,
            epsilon: vec![],
            s_grid: None,
            mode: None,
            alpha: None,
            objective: None,
            qualification: None,
            cc3_evidence: None,
            samples: None,
            cost: None,
            sampler: None,
        }
    }

    pub fn with_point(mut self, x: &Vector) -> Self {
        self.point = Some(qs(x));
        self
    }

    pub fn with_epsilon(mut self, eps: &[Rational]) -> Self {
        self.epsilon = eps.iter().cloned().map(Q).collect();
        self
    }

    pub fn from_family(id: impl Into<String>, family: &SupFamily) -> Self {
        let mut f = InstanceFile::new(id, family.dim());
        f.members = family.members().iter().map(MemberSpec::from_member).collect();
        f
    }

    pub fn from_qc_family(id: impl Into<String>, family: &SublevelOracleQC) -> Self {
        let mut f = InstanceFile::new(id, family.dim());
        f.members = family
            .members()
            .iter()
            .map(|m| MemberSpec::from_qc(&m.id, &m.evaluator))
            .collect();
        f
    }

    pub fn from_program(id: impl Into<String>, prog: &ProgramInstance) -> Self {
        let mut f = InstanceFile::from_family(id, &prog.constraints).with_point(&prog.candidate);
        f.objective = Some(ObjectiveSpec {
            pieces: prog.objective.pieces().iter().map(PieceSpec::from_model).collect(),
            domain: domain_spec(prog.objective.domain()),
        });
        f.qualification = Some(match &prog.qualification {
            Qualification::ObjectiveContinuousAt(y) => QualificationSpec::F0ContinuousAt { point: qs(y) },
            Qualification::InteriorMeetsDomain(y) => QualificationSpec::InteriorMeetsDomF0 { point: qs(y) },
        });
        f
    }

    fn members_or_err(&self) -> Result<&[MemberSpec]> {
        if self.members.is_empty() {
            return Err(Error::Input("at members: at least one member is required".into()));
        }
        Ok(&self.members)
    }

    pub fn sup_family(&self) -> Result<SupFamily> {
        let members = self
            .members_or_err()?
            .iter()
            .enumerate()
            .map(|(i, m)| m.to_member(&format!("members[{i}]"), self.dim))
            .collect::<Result<Vec<_>>>()?;
        SupFamily::new(members)
    }

    pub fn qc_family(&self) -> Result<SublevelOracleQC> {
        let members = self
            .members_or_err()?
            .iter()
            .enumerate()
            .map(|(i, m)| m.to_qc(&format!("members[{i}]"), self.dim))
            .collect::<Result<Vec<_>>>()?;
        SublevelOracleQC::from_evaluators(members)
    }

    pub fn point(&self) -> Result<Vector> {
        let p = self
            .point
            .as_ref()
            .ok_or_else(|| Error::Input("at point: a query point is required".into()))?;
        vector("point", self.dim, p)
    }

    /// The ε list, or `default` when the file gives none.
    pub fn epsilons(&self, default: &[Rational]) -> Vec<Rational> {
        if self.epsilon.is_empty() {
            default.to_vec()
        } else {
            self.epsilon.iter().map(|q| q.0.clone()).collect()
        }
    }

    pub fn grid(&self) -> Result<SGrid> {
        match &self.s_grid {
            None => Ok(SGrid::default_grid()),
            Some(GridSpec::Geometric { base, min_exp, max_exp }) => SGrid::geometric(base.0.clone(), *min_exp, *max_exp),
            Some(GridSpec::Values { values }) => SGrid::from_values(values.iter().map(|q| q.0.clone()).collect()),
        }
        .map_err(|e| Error::Input(format!("at s_grid: {e}")))
    }

    pub fn mode(&self) -> Option<Mode> {
        self.mode.map(|m| match m {
            ModeSpec::ExactAffine => Mode::ExactAffine,
            ModeSpec::Sampled => Mode::Sampled,
        })
    }

    pub fn alpha_policy(&self) -> AlphaPolicy {
        match &self.alpha {
            None | Some(AlphaSpec::Rho) => AlphaPolicy::Rho,
            Some(AlphaSpec::Ones) => AlphaPolicy::Ones,
            Some(AlphaSpec::Custom(w)) => AlphaPolicy::Custom(w.iter().map(|(k, v)| (k.clone(), v.0.clone())).collect()),
        }
    }

    pub fn evidence(&self) -> Result<Cc3Evidence> {
        Ok(match &self.cc3_evidence {
            None => Cc3Evidence::Unverified,
            Some(EvidenceSpec::Checked) => Cc3Evidence::Checked,
            Some(EvidenceSpec::ContinuousAt { point }) => {
                Cc3Evidence::ContinuousAt(vector("cc3_evidence.point", self.dim, point)?)
            }
        })
    }

    fn objective_model(&self) -> Result<PolyhedralFunction> {
        let o = self
            .objective
            .as_ref()
            .ok_or_else(|| Error::Input("at objective: an objective is required".into()))?;
        PolyhedralFunction::new(
            pieces_model("objective.pieces", self.dim, &o.pieces)?,
            domain_model("objective.domain", self.dim, &o.domain)?,
        )
    }

    fn qualification_model(&self) -> Result<Qualification> {
        match &self.qualification {
            None => Err(Error::Input("at qualification: a qualification is required".into())),
            Some(QualificationSpec::F0ContinuousAt { point }) => Ok(Qualification::ObjectiveContinuousAt(vector(
                "qualification.point",
                self.dim,
                point,
            )?)),
            Some(QualificationSpec::InteriorMeetsDomF0 { point }) => Ok(Qualification::InteriorMeetsDomain(vector(
                "qualification.point",
                self.dim,
                point,
            )?)),
        }
    }

    pub fn program(&self) -> Result<ProgramInstance> {
        Ok(ProgramInstance {
            objective: self.objective_model()?,
            constraints: self.sup_family()?,
            candidate: self.point()?,
            qualification: self.qualification_model()?,
        })
    }

    pub fn qc_program(&self) -> Result<QcProgram> {
        Ok(QcProgram {
            objective: self.objective_model()?,
            constraints: self.qc_family()?,
            candidate: self.point()?,
            qualification: self.qualification_model()?,
            evidence: self.evidence()?,
        })
    }

    /// The SIP instance and its refinement levels.
    pub fn sip(&self) -> Result<(LinearSipInstance, Vec<u32>)> {
        let cost = self
            .cost
            .as_ref()
            .ok_or_else(|| Error::Input("at cost: a cost vector is required".into()))?;
        let sampler = self
            .sampler
            .as_ref()
            .ok_or_else(|| Error::Input("at sampler: a sampler is required".into()))?;
        let (family, levels) = match sampler {
            SamplerSpec::Finite { rows } => {
                if rows.is_empty() {
                    return Err(Error::Input("at sampler.rows: at least one row is required".into()));
                }
                let rows = rows
                    .iter()
                    .enumerate()
                    .map(|(i, r)| Ok((vector(&format!("sampler.rows[{i}].a"), self.dim, &r.a)?, r.b.0.clone())))
                    .collect::<Result<Vec<_>>>()?;
                (IndexFamily::Finite(rows), vec![])
            }
            SamplerSpec::Circle {
                radius,
                span,
                shift,
                levels,
            } => {
                if self.dim != 2 {
                    return Err(Error::Input("at dim: the circle sampler lives in dimension 2".into()));
                }
                (
                    IndexFamily::Circle {
                        radius: radius.0.clone(),
                        span: span.0.clone(),
                        shift: shift.0.clone(),
                    },
                    levels.clone(),
                )
            }
        };
        Ok((
            LinearSipInstance {
                cost: vector("cost", self.dim, cost)?,
                family,
                candidate: self.point()?,
            },
            levels,
        ))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::{rat, ratio};

    const ORTHANT: &str = r#"{
  "version": 1,
  "id": "orthant",
  "dim": 2,
  "members": [
    {
      "kind": "affine",
      "id": "1",
      "slope": [
        "1",
        "0"
      ],
      "intercept": "0"
    },
    {
      "kind": "affine",
      "id": "2",
      "slope": [
        "0",
        "1"
      ],
      "intercept": "0"
    }
  ],
  "point": [
    "0",
    "0"
  ],
  "epsilon": [
    "1",
    "1/2"
  ]
}
"#;

    #[test]
    fn canonical_round_trip() {
        let f = parse_instance(ORTHANT).unwrap();
        assert_eq!(print_instance(&f), ORTHANT);
        assert_eq!(f.sup_family().unwrap().members().len(), 2);
        assert_eq!(f.epsilons(&[]), vec![rat(1), ratio(1, 2)]);
    }

    #[test]
    fn rationals_are_normalized() {
        let text = ORTHANT.replace("\"1/2\"", "\"2/4\"");
        assert_eq!(print_instance(&parse_instance(&text).unwrap()), ORTHANT);
    }

    #[test]
    fn errors_name_the_field() {
        let bad = ORTHANT.replace("\"1/2\"", "\"1/0\"");
        let e = parse_instance(&bad).unwrap_err().to_string();
        assert!(e.contains("epsilon[1]") && e.contains("zero denominator"), "{e}");
        let unknown = ORTHANT.replace("\"intercept\": \"0\"\n    },\n    {", "\"intercept\": \"0\",\n \"extra\": 1\n    },\n    {");
        let e = parse_instance(&unknown).unwrap_err().to_string();
        assert!(e.contains("members[0]") && e.contains("extra"), "{e}");
        let member = ORTHANT.replacen("\"intercept\": \"0\"", "\"intercept\": \"1/0\"", 1);
        let e = parse_instance(&member).unwrap_err().to_string();
        assert!(e.contains("at members[0].intercept: zero denominator"), "{e}");
        let top = ORTHANT.replace("\"dim\": 2,", "\"dim\": 2, \"colour\": 1,");
        assert!(parse_instance(&top).unwrap_err().to_string().contains("colour"));
        let wrong_dim = ORTHANT.replace("\"dim\": 2", "\"dim\": 3");
        let e = parse_instance(&wrong_dim).unwrap().sup_family().unwrap_err().to_string();
        assert!(e.contains("members[0].slope"), "{e}");
        let version = ORTHANT.replace("\"version\": 1", "\"version\": 7");
        assert!(parse_instance(&version).is_err());
    }

    #[test]
    fn model_round_trip() {
        let fam = SupFamily::new(vec![
            Member::new(
                "m",
                PolyhedralFunction::new(
                    vec![
                        AffinePiece::new(Vector::from_ints(&[1]), rat(-1)),
                        AffinePiece::new(Vector::from_ints(&[-1]), ratio(-1, 3)),
                    ],
                    PolyhedronH::from_int_rows(1, &[(&[1], 5)]),
                )
                .unwrap(),
            ),
            Member::new("d", ImproperFunction::new(PolyhedronH::from_int_rows(1, &[(&[-1], 2)])).unwrap()),
        ])
        .unwrap();
        let file = InstanceFile::from_family("x", &fam);
        let back = parse_instance(&print_instance(&file)).unwrap();
        assert_eq!(back, file);
        assert_eq!(back.sup_family().unwrap(), fam);
    }
}
