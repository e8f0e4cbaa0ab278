//! Binary portable pixmaps (P6, maxval 255).

use brickcomp_core::wall::Raster;

use super::ParseError;

pub fn encode_ppm(r: &Raster) -> Vec<u8> {
    let mut out = format!("P6\n{} {}\n255\n", r.width, r.height).into_bytes();
    out.reserve(r.pixels.len() * 3);
    for p in &r.pixels {
        out.extend_from_slice(p);
    }
    out
}

/// Reads the subset of P6 that [`encode_ppm`] writes (no comments).
pub fn decode_ppm(bytes: &[u8]) -> Result<Raster, ParseError> {
    let mut fields = Vec::with_capacity(4);
    let mut pos = 0;
    while fields.len() < 4 {
        while pos < bytes.len() && bytes[pos].is_ascii_whitespace() {
            pos += 1;
        }
        let start = pos;
        while pos < bytes.len() && !bytes[pos].is_ascii_whitespace() {
            pos += 1;
        }
        if start == pos {
            return Err(ParseError::new(1, "truncated header"));
        }
        fields.push(std::str::from_utf8(&bytes[start..pos]).map_err(|_| ParseError::new(1, "non-ASCII header"))?);
    }
    if fields[0] != "P6" || fields[3] != "255" {
        return Err(ParseError::new(1, "not a P6 image with maxval 255"));
    }
    let width: usize = fields[1].parse().map_err(|_| ParseError::new(1, "bad width"))?;
    let height: usize = fields[2].parse().map_err(|_| ParseError::new(1, "bad height"))?;
    if pos >= bytes.len() {
        return Err(ParseError::new(1, "missing pixel data"));
    }
    let data = &bytes[pos + 1..];
    if data.len() != width * height * 3 {
        return Err(ParseError::new(1, "pixel data length does not match the header"));
    }
    let pixels = data.chunks_exact(3).map(|c| [c[0], c[1], c[2]]).collect();
    Ok(Raster { width, height, pixels })
}
