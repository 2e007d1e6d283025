//! 8-bit grayscale rasters and their on-disk formats (binary PGM, PNG).

use std::fs;
use std::io::Write;
use std::path::Path;

use crate::error::{Error, Result};

pub const DEFAULT_DPI: u32 = 500;

/// Smallest width/height any metric accepts.
pub const MIN_SIDE: usize = 32;

/// Row-major 8-bit single-channel image. 0 is ridge ink, 255 is background.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GrayImage {
    width: usize,
    height: usize,
    pixels: Vec<u8>,
    dpi: u32,
}

impl GrayImage {
    pub fn new(width: usize, height: usize, pixels: Vec<u8>) -> Result<Self> {
        if pixels.len() != width * height {
            return Err(Error::InvalidParameter(format!(
                "pixel buffer holds {} values, expected {}x{}={}",
                pixels.len(),
                width,
                height,
                width * height
            )));
        }
        Ok(Self {
            width,
            height,
            pixels,
            dpi: DEFAULT_DPI,
        })
    }

    pub fn from_fn(width: usize, height: usize, mut f: impl FnMut(usize, usize) -> u8) -> Self {
        let mut pixels = Vec::with_capacity(width * height);
        for y in 0..height {
            for x in 0..width {
                pixels.push(f(x, y));
            }
        }
        Self {
            width,
            height,
            pixels,
            dpi: DEFAULT_DPI,
        }
    }

    pub fn filled(width: usize, height: usize, value: u8) -> Self {
        Self::from_fn(width, height, |_, _| value)
    }

    /// Quantizes a real-valued buffer: round to nearest, clamp to [0, 255].
    pub fn from_f64(width: usize, height: usize, values: &[f64]) -> Result<Self> {
        let pixels = values.iter().map(|&v| quantize(v)).collect();
        Self::new(width, height, pixels)
    }

    pub fn with_dpi(mut self, dpi: u32) -> Result<Self> {
        if dpi == 0 {
            return Err(Error::InvalidParameter("dpi must be positive".into()));
        }
        self.dpi = dpi;
        Ok(self)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn dpi(&self) -> u32 {
        self.dpi
    }

    pub fn pixels(&self) -> &[u8] {
        &self.pixels
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> u8 {
        self.pixels[y * self.width + x]
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.pixels.iter().map(|&p| f64::from(p)).collect()
    }

    /// Bilinear sample at a real-valued position. Pixel `(x, y)` covers
    /// `[x − ½, x + ½) × [y − ½, y + ½)`; positions in the outer half pixel
    /// take the edge value and positions off the image give `None`.
    pub fn sample_bilinear(&self, x: f64, y: f64) -> Option<f64> {
        let max_x = (self.width - 1) as f64;
        let max_y = (self.height - 1) as f64;
        if !(-0.5..max_x + 0.5).contains(&x) || !(-0.5..max_y + 0.5).contains(&y) {
            return None;
        }
        let x = snap(x).clamp(0.0, max_x);
        let y = snap(y).clamp(0.0, max_y);
        let x0 = x.floor() as usize;
        let y0 = y.floor() as usize;
        let fx = x - x0 as f64;
        let fy = y - y0 as f64;
        let x1 = (x0 + 1).min(self.width - 1);
        let y1 = (y0 + 1).min(self.height - 1);
        let p = |xx, yy| f64::from(self.get(xx, yy));
        let top = p(x0, y0) * (1.0 - fx) + p(x1, y0) * fx;
        let bottom = p(x0, y1) * (1.0 - fx) + p(x1, y1) * fx;
        Some(top * (1.0 - fy) + bottom * fy)
    }

    pub fn ensure_measurable(&self) -> Result<()> {
        if self.width < MIN_SIDE || self.height < MIN_SIDE {
            return Err(Error::ImageTooSmall {
                width: self.width,
                height: self.height,
            });
        }
        Ok(())
    }

    pub fn encode_pgm(&self) -> Vec<u8> {
        let mut out = format!("P5\n{} {}\n255\n", self.width, self.height).into_bytes();
        out.extend_from_slice(&self.pixels);
        out
    }

    pub fn save_pgm(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        let mut file = fs::File::create(path).map_err(|e| Error::io(path, e))?;
        file.write_all(&self.encode_pgm())
            .map_err(|e| Error::io(path, e))
    }
}

#[inline]
pub(crate) fn quantize(v: f64) -> u8 {
    v.round().clamp(0.0, 255.0) as u8
}

// Lattice coordinates computed through trig functions land a few ulps off
// integers; snapping keeps axis-aligned sampling exact.
#[inline]
fn snap(v: f64) -> f64 {
    let r = v.round();
    if (v - r).abs() < 1e-9 {
        r
    } else {
        v
    }
}

/// Reads a binary PGM (P5, maxval 255) or an 8-bit grayscale PNG.
///
/// `dpi` overrides the resolution; otherwise [`DEFAULT_DPI`] is used.
pub fn load_image(path: impl AsRef<Path>, dpi: Option<u32>) -> Result<GrayImage> {
    let path = path.as_ref();
    let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
    let img = decode_image(&bytes)?;
    img.with_dpi(dpi.unwrap_or(DEFAULT_DPI))
}

pub fn decode_image(bytes: &[u8]) -> Result<GrayImage> {
    const PNG_MAGIC: &[u8] = b"\x89PNG\r\n\x1a\n";
    if bytes.starts_with(b"P5") {
        decode_pgm(bytes)
    } else if bytes.starts_with(PNG_MAGIC) {
        decode_png(bytes)
    } else if bytes.starts_with(b"P2") {
        Err(Error::Format("unsupported format: ASCII PGM (P2)".into()))
    } else {
        Err(Error::Format(
            "unsupported format: expected binary PGM (P5) or PNG".into(),
        ))
    }
}

fn decode_pgm(bytes: &[u8]) -> Result<GrayImage> {
    // Header: magic, width, height, maxval separated by whitespace, with
    // '#' comments running to end of line, then exactly one whitespace byte.
    let mut pos = 2;
    let mut fields = [0usize; 3];
    for (i, name) in ["width", "height", "maxval"].iter().enumerate() {
        loop {
            match bytes.get(pos) {
                Some(b'#') => {
                    while bytes.get(pos).is_some_and(|&b| b != b'\n') {
                        pos += 1;
                    }
                }
                Some(b) if b.is_ascii_whitespace() => pos += 1,
                _ => break,
            }
        }
        let start = pos;
        while bytes.get(pos).is_some_and(u8::is_ascii_digit) {
            pos += 1;
        }
        if start == pos {
            return Err(Error::Format(format!("PGM header: missing {name}")));
        }
        let text = std::str::from_utf8(&bytes[start..pos]).expect("ascii digits");
        fields[i] = text
            .parse()
            .map_err(|_| Error::Format(format!("PGM header: {name} out of range")))?;
    }
    if !bytes.get(pos).is_some_and(u8::is_ascii_whitespace) {
        return Err(Error::Format("PGM header: malformed terminator".into()));
    }
    pos += 1;

    let [width, height, maxval] = fields;
    if maxval != 255 {
        return Err(Error::Format(format!(
            "unsupported bit depth: PGM maxval {maxval} (only 255 is accepted)"
        )));
    }
    if width == 0 || height == 0 {
        return Err(Error::Format("PGM header: zero dimension".into()));
    }
    let expected = width * height;
    let payload = &bytes[pos..];
    if payload.len() < expected {
        return Err(Error::Format(format!(
            "truncated PGM payload: {} of {} bytes",
            payload.len(),
            expected
        )));
    }
    GrayImage::new(width, height, payload[..expected].to_vec())
}

fn decode_png(bytes: &[u8]) -> Result<GrayImage> {
    let decoder = png::Decoder::new(std::io::Cursor::new(bytes));
    let mut reader = decoder
        .read_info()
        .map_err(|e| Error::Format(format!("PNG: {e}")))?;
    let info = reader.info();
    if info.bit_depth != png::BitDepth::Eight {
        return Err(Error::Format(format!(
            "unsupported bit depth: PNG is {}-bit",
            info.bit_depth as u8
        )));
    }
    if info.color_type != png::ColorType::Grayscale {
        return Err(Error::Format(format!(
            "unsupported color type: PNG is {:?}, expected grayscale",
            info.color_type
        )));
    }
    let (width, height) = (info.width as usize, info.height as usize);
    let size = reader
        .output_buffer_size()
        .ok_or_else(|| Error::Format("PNG: image too large".into()))?;
    let mut buf = vec![0; size];
    let frame = reader
        .next_frame(&mut buf)
        .map_err(|e| Error::Format(format!("PNG: {e}")))?;
    buf.truncate(frame.buffer_size());
    GrayImage::new(width, height, buf)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn png_bytes(width: u32, height: u32, depth: png::BitDepth, data: &[u8]) -> Vec<u8> {
        let mut out = Vec::new();
        {
            let mut enc = png::Encoder::new(&mut out, width, height);
            enc.set_color(png::ColorType::Grayscale);
            enc.set_depth(depth);
            let mut writer = enc.write_header().unwrap();
            writer.write_image_data(data).unwrap();
        }
        out
    }

    #[test]
    fn pgm_header_is_read() {
        let img = GrayImage::from_fn(96, 96, |x, y| ((x + y) % 256) as u8);
        let decoded = decode_image(&img.encode_pgm()).unwrap();
        assert_eq!(decoded.width(), 96);
        assert_eq!(decoded.height(), 96);
        assert_eq!(decoded, img);
    }

    #[test]
    fn pgm_comments_are_skipped() {
        let mut bytes = b"P5\n# made by hand\n2 # width\n2\n255\n".to_vec();
        bytes.extend_from_slice(&[0, 1, 2, 3]);
        let img = decode_image(&bytes).unwrap();
        assert_eq!(img.pixels(), &[0, 1, 2, 3]);
    }

    #[test]
    fn truncated_pgm_is_a_format_error() {
        let mut bytes = GrayImage::filled(96, 96, 7).encode_pgm();
        bytes.truncate(bytes.len() - 10);
        let err = decode_image(&bytes).unwrap_err();
        assert!(matches!(err, Error::Format(ref m) if m.contains("truncated")), "{err}");
    }

    #[test]
    fn sixteen_bit_pgm_is_rejected() {
        let mut bytes = b"P5\n2 2\n65535\n".to_vec();
        bytes.extend_from_slice(&[0; 8]);
        let err = decode_image(&bytes).unwrap_err();
        assert!(err.to_string().contains("unsupported bit depth"), "{err}");
    }

    #[test]
    fn png_eight_bit_gray_roundtrips() {
        let data: Vec<u8> = (0..64u32 * 40).map(|i| (i % 251) as u8).collect();
        let img = decode_image(&png_bytes(64, 40, png::BitDepth::Eight, &data)).unwrap();
        assert_eq!((img.width(), img.height()), (64, 40));
        assert_eq!(img.pixels(), &data[..]);
    }

    #[test]
    fn sixteen_bit_png_is_rejected() {
        let data = vec![0u8; 4 * 4 * 2];
        let err = decode_image(&png_bytes(4, 4, png::BitDepth::Sixteen, &data)).unwrap_err();
        assert!(err.to_string().contains("unsupported bit depth"), "{err}");
    }

    #[test]
    fn unknown_magic_is_rejected() {
        assert!(matches!(
            decode_image(b"GIF89a..."),
            Err(Error::Format(_))
        ));
    }

    #[test]
    fn bilinear_interpolates_and_bounds() {
        let img = GrayImage::new(2, 2, vec![0, 100, 100, 200]).unwrap();
        assert_eq!(img.sample_bilinear(0.5, 0.5), Some(100.0));
        assert_eq!(img.sample_bilinear(1.0, 0.0), Some(100.0));
        assert_eq!(img.sample_bilinear(1.0 + 1e-12, 1.0), Some(200.0));
        assert_eq!(img.sample_bilinear(1.4, 0.0), Some(100.0));
        assert_eq!(img.sample_bilinear(-0.1, 0.0), Some(0.0));
        assert_eq!(img.sample_bilinear(-0.1, 1.49), Some(100.0));
        assert_eq!(img.sample_bilinear(1.5, 0.0), None);
        assert_eq!(img.sample_bilinear(0.0, -0.5001), None);
    }

    #[test]
    fn dpi_must_be_positive() {
        assert!(GrayImage::filled(32, 32, 0).with_dpi(0).is_err());
        assert_eq!(GrayImage::filled(32, 32, 0).dpi(), DEFAULT_DPI);
    }

    #[test]
    fn small_images_are_not_measurable() {
        assert!(GrayImage::filled(31, 64, 0).ensure_measurable().is_err());
        assert!(GrayImage::filled(32, 32, 0).ensure_measurable().is_ok());
    }
}
