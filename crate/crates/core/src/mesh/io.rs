use std::fmt::Write as _;
use std::path::Path;
use std::str::FromStr;

use crate::numeric::Vec3;

use super::{MeshError, TriMesh};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MeshFormat {
    Off,
    /// The `v` / `f` subset of Wavefront OBJ.
    Obj,
}

impl MeshFormat {
    /// Guesses the format from a file extension.
    pub fn from_path(path: &Path) -> Option<Self> {
        match path.extension()?.to_str()?.to_ascii_lowercase().as_str() {
            "off" => Some(Self::Off),
            "obj" => Some(Self::Obj),
            _ => None,
        }
    }
}

/// A whitespace-separated token with its 1-based position.
#[derive(Debug, Clone, Copy)]
struct Token<'a> {
    text: &'a str,
    line: usize,
    column: usize,
}

impl Token<'_> {
    fn error(&self, message: impl Into<String>) -> MeshError {
        MeshError::Parse {
            line: self.line,
            column: self.column,
            message: message.into(),
        }
    }

    fn parse<T: FromStr>(&self, what: &str) -> Result<T, MeshError> {
        self.text
            .parse()
            .map_err(|_| self.error(format!("expected {what}, found `{}`", self.text)))
    }
}

/// Non-empty lines with comments removed, split into tokens.
fn tokenize(text: &str) -> Vec<Vec<Token<'_>>> {
    text.lines()
        .enumerate()
        .filter_map(|(n, line)| {
            let content = line.split('#').next().unwrap_or("");
            let mut tokens = Vec::new();
            let mut rest = content;
            let mut offset = 0;
            while let Some(start) = rest.find(|c: char| !c.is_whitespace()) {
                let tail = &rest[start..];
                let len = tail.find(char::is_whitespace).unwrap_or(tail.len());
                tokens.push(Token {
                    text: &tail[..len],
                    line: n + 1,
                    column: offset + start + 1,
                });
                offset += start + len;
                rest = &tail[len..];
            }
            (!tokens.is_empty()).then_some(tokens)
        })
        .collect()
}

fn end_of_input(text: &str, message: String) -> MeshError {
    MeshError::Parse {
        line: text.lines().count() + 1,
        column: 1,
        message,
    }
}

fn point(tokens: &[Token<'_>], line: &Token<'_>) -> Result<Vec3, MeshError> {
    if tokens.len() < 3 {
        return Err(line.error("expected three vertex coordinates"));
    }
    let x: f64 = tokens[0].parse("a number")?;
    let y: f64 = tokens[1].parse("a number")?;
    let z: f64 = tokens[2].parse("a number")?;
    if !(x.is_finite() && y.is_finite() && z.is_finite()) {
        return Err(tokens[0].error("vertex coordinates must be finite"));
    }
    Ok(Vec3::new(x, y, z))
}

fn parse_off(text: &str) -> Result<TriMesh, MeshError> {
    let lines = tokenize(text);
    let first = lines
        .first()
        .ok_or_else(|| end_of_input(text, "empty file".into()))?;
    if first[0].text != "OFF" {
        return Err(first[0].error(format!("expected `OFF`, found `{}`", first[0].text)));
    }
    // The counts may share the header line or sit on the next one.
    let (counts, body_start) = if first.len() > 1 {
        (&first[1..], 1)
    } else {
        let next = lines
            .get(1)
            .ok_or_else(|| end_of_input(text, "missing vertex and face counts".into()))?;
        (&next[..], 2)
    };
    if counts.len() < 2 {
        return Err(counts[0].error("expected vertex, face and edge counts"));
    }
    let nv: usize = counts[0].parse("a vertex count")?;
    let nf: usize = counts[1].parse("a face count")?;
    if let Some(t) = counts.get(2) {
        let _edges: usize = t.parse("an edge count")?;
    }
    let body = &lines[body_start..];

    if body.len() < nv + nf {
        return Err(end_of_input(
            text,
            format!(
                "expected {nv} vertices and {nf} faces, found {} records",
                body.len()
            ),
        ));
    }
    let mut vertices = Vec::with_capacity(nv);
    for line in &body[..nv] {
        vertices.push(point(line, &line[0])?);
    }
    let mut polygons = Vec::with_capacity(nf);
    for (f, line) in body[nv..nv + nf].iter().enumerate() {
        let n: usize = line[0].parse("a vertex count")?;
        if line.len() < n + 1 {
            return Err(line[0].error(format!("face declares {n} vertices but lists {}", line.len() - 1)));
        }
        let mut poly = Vec::with_capacity(n);
        for t in &line[1..=n] {
            let index: i64 = t.parse("a vertex index")?;
            if index < 0 || index as usize >= nv {
                return Err(MeshError::IndexOutOfRange {
                    face: f,
                    index,
                    count: nv,
                });
            }
            poly.push(index as usize);
        }
        polygons.push(poly);
    }
    if let Some(extra) = body.get(nv + nf) {
        return Err(extra[0].error("unexpected data after the last face"));
    }
    TriMesh::from_polygons(vertices, &polygons)
}

fn parse_obj(text: &str) -> Result<TriMesh, MeshError> {
    let mut vertices = Vec::new();
    let mut polygons = Vec::new();
    let mut pending: Vec<(usize, Vec<(i64, Token<'_>)>)> = Vec::new();
    for line in tokenize(text) {
        let keyword = line[0];
        match keyword.text {
            "v" => vertices.push(point(&line[1..], &keyword)?),
            "f" => {
                if line.len() < 4 {
                    return Err(keyword.error("a face needs at least three vertices"));
                }
                let mut refs = Vec::with_capacity(line.len() - 1);
                for t in &line[1..] {
                    let head = Token {
                        text: t.text.split('/').next().unwrap_or(""),
                        ..*t
                    };
                    let index: i64 = head.parse("a vertex index")?;
                    if index == 0 {
                        return Err(t.error("OBJ indices start at 1"));
                    }
                    // Negative indices count back from the vertices read so far.
                    let resolved = if index < 0 {
                        vertices.len() as i64 + index
                    } else {
                        index - 1
                    };
                    refs.push((resolved, *t));
                }
                pending.push((polygons.len() + pending.len(), refs));
            }
            "vn" | "vt" | "vp" | "o" | "g" | "s" | "usemtl" | "mtllib" => {}
            other => return Err(keyword.error(format!("unsupported statement `{other}`"))),
        }
    }
    let count = vertices.len();
    for (f, refs) in pending {
        let mut poly = Vec::with_capacity(refs.len());
        for (index, _) in refs {
            if index < 0 || index as usize >= count {
                return Err(MeshError::IndexOutOfRange {
                    face: f,
                    index: index + 1,
                    count,
                });
            }
            poly.push(index as usize);
        }
        polygons.push(poly);
    }
    TriMesh::from_polygons(vertices, &polygons)
}

/// Parses a mesh; polygons with more than three vertices are fan-triangulated.
pub fn load_mesh(bytes: &[u8], format: MeshFormat) -> Result<TriMesh, MeshError> {
    let text = std::str::from_utf8(bytes).map_err(|e| {
        let before = &bytes[..e.valid_up_to()];
        let line = before.iter().filter(|&&b| b == b'\n').count() + 1;
        let column = before.iter().rev().take_while(|&&b| b != b'\n').count() + 1;
        MeshError::Parse {
            line,
            column,
            message: "invalid UTF-8".into(),
        }
    })?;
    match format {
        MeshFormat::Off => parse_off(text),
        MeshFormat::Obj => parse_obj(text),
    }
}

/// Reads a mesh file, choosing the format from its extension.
pub fn load_mesh_file(path: &Path) -> Result<TriMesh, MeshError> {
    let format = MeshFormat::from_path(path).ok_or_else(|| {
        MeshError::Io(format!("{}: unknown mesh format (expected .off or .obj)", path.display()))
    })?;
    let bytes = std::fs::read(path).map_err(|e| MeshError::Io(format!("{}: {e}", path.display())))?;
    load_mesh(&bytes, format)
}

/// Serialises a mesh as OFF with full-precision coordinates.
pub fn write_off(mesh: &TriMesh) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "OFF");
    let _ = writeln!(out, "{} {} {}", mesh.vertex_count(), mesh.face_count(), mesh.edge_count());
    for v in mesh.vertices() {
        let _ = writeln!(out, "{:?} {:?} {:?}", v.x, v.y, v.z);
    }
    for [a, b, c] in mesh.faces() {
        let _ = writeln!(out, "3 {a} {b} {c}");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::{cube, genus2};

    const TETRA: &str = "OFF\n# regular tetrahedron\n4 4 6\n1 1 1\n1 -1 -1\n-1 1 -1\n-1 -1 1\n3 0 1 2\n3 0 3 1\n3 0 2 3\n3 1 3 2\n";

    #[test]
    fn off_tetrahedron() {
        let m = load_mesh(TETRA.as_bytes(), MeshFormat::Off).unwrap();
        assert_eq!((m.vertex_count(), m.face_count(), m.edge_count()), (4, 4, 6));
    }

    #[test]
    fn off_counts_on_header_line() {
        let text = TETRA.replacen("OFF\n# regular tetrahedron\n4 4 6", "OFF 4 4 6", 1);
        let m = load_mesh(text.as_bytes(), MeshFormat::Off).unwrap();
        assert_eq!(m.face_count(), 4);
    }

    #[test]
    fn obj_cube_with_quads() {
        let text = "# cube\nv 0 0 0\nv 1 0 0\nv 1 1 0\nv 0 1 0\nv 0 0 1\nv 1 0 1\nv 1 1 1\nv 0 1 1\n\
                    f 1 4 3 2\nf 5 6 7 8\nf 1 2 6 5\nf 2 3 7 6\nf 3 4 8 7\nf 4/1 1/2 5/3 8/4\n";
        let m = load_mesh(text.as_bytes(), MeshFormat::Obj).unwrap();
        assert_eq!((m.vertex_count(), m.face_count()), (8, 12));
        assert_eq!(m.euler_characteristic(), 2);
        m.validate_closed().unwrap();
    }

    #[test]
    fn obj_negative_indices() {
        let text = "v 0 0 0\nv 1 0 0\nv 0 1 0\nf -3 -2 -1\n";
        let m = load_mesh(text.as_bytes(), MeshFormat::Obj).unwrap();
        assert_eq!(m.faces(), &[[0, 1, 2]]);
    }

    #[test]
    fn truncated_off_reports_position() {
        let text = "OFF\n4 4 6\n1 1 1\n1 -1 -1\n-1 1 -1\n-1 -1 1\n3 0 1 2\n";
        match load_mesh(text.as_bytes(), MeshFormat::Off) {
            Err(MeshError::Parse { line, column, .. }) => assert_eq!((line, column), (8, 1)),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn garbage_reports_position() {
        match load_mesh(b"OFF\n4 four 6\n", MeshFormat::Off) {
            Err(MeshError::Parse { line, column, message }) => {
                assert_eq!((line, column), (2, 3), "{message}")
            }
            other => panic!("{other:?}"),
        }
        match load_mesh(b"v 0 0 0\nv 1 0 x\n", MeshFormat::Obj) {
            Err(MeshError::Parse { line, column, .. }) => assert_eq!((line, column), (2, 7)),
            other => panic!("{other:?}"),
        }
        match load_mesh(b"PLY\n", MeshFormat::Off) {
            Err(MeshError::Parse { line, column, .. }) => assert_eq!((line, column), (1, 1)),
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            load_mesh(b"hello world\n", MeshFormat::Obj),
            Err(MeshError::Parse { line: 1, column: 1, .. })
        ));
    }

    #[test]
    fn out_of_range_index() {
        let text = "OFF\n3 1 0\n0 0 0\n1 0 0\n0 1 0\n3 0 1 5\n";
        assert!(matches!(
            load_mesh(text.as_bytes(), MeshFormat::Off),
            Err(MeshError::IndexOutOfRange { index: 5, .. })
        ));
        assert!(matches!(
            load_mesh(b"v 0 0 0\nv 1 0 0\nv 0 1 0\nf 1 2 4\n", MeshFormat::Obj),
            Err(MeshError::IndexOutOfRange { index: 4, .. })
        ));
    }

    #[test]
    fn off_round_trip_is_exact() {
        for m in [cube(), genus2()] {
            let back = load_mesh(write_off(&m).as_bytes(), MeshFormat::Off).unwrap();
            assert_eq!(back, m);
        }
    }
}
