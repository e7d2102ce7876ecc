use std::fs;
use std::path::Path;

use qwvd_core::grid::GridGeometry;
use qwvd_core::io::{
    export_heatmap, export_image, export_wvd_slices, ingest_image, load_qgrid, read_heatmap_meta, save_qgrid, sidecar_path, GridKind, HeatmapFormat,
    HeatmapMode,
};
use qwvd_core::oracle::oracle_wvd;
use qwvd_core::qft::{natural_frequency_grid, qft_forward};
use qwvd_core::signals::{gaussian, generate, random_quaternion_grid, GeneratorKind, GeneratorParams};
use qwvd_core::wvd::{wvd_frequency_grid, wvd_qolct};
use qwvd_core::{AxisPair, OffsetParams, Quaternion, SampledSignal};

fn ppm(path: &Path, w: u32, h: u32, rgb: &[u8]) {
    let mut bytes = format!("P6\n{w} {h}\n255\n").into_bytes();
    bytes.extend_from_slice(rgb);
    fs::write(path, bytes).unwrap();
}

fn pgm_levels(path: &Path) -> Vec<u8> {
    image::open(path).unwrap().to_luma8().into_raw()
}

#[test]
fn red_image_is_pure_i() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("red.ppm");
    ppm(&p, 2, 2, &[255, 0, 0].repeat(4));
    let f = ingest_image(&p).unwrap();
    assert_eq!(f.geometry().len(), 4);
    assert!(f.values().iter().all(|&q| q == Quaternion::I));
}

#[test]
fn black_image_is_zero() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("black.ppm");
    ppm(&p, 3, 2, &[0; 18]);
    let f = ingest_image(&p).unwrap();
    assert_eq!((f.geometry().n1, f.geometry().n2), (2, 3));
    assert!(f.values().iter().all(|&q| q == Quaternion::ZERO));
}

#[test]
fn ascii_pixmap_is_read() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("a.ppm");
    fs::write(&p, "P3\n2 2\n255\n0 255 51  0 0 0\n0 0 0  0 0 0\n").unwrap();
    let f = ingest_image(&p).unwrap();
    assert_eq!(f.get(0, 0), Quaternion::new(0.0, 0.0, 1.0, 0.2));
}

#[test]
fn image_round_trip_is_lossless() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.ppm");
    let b = dir.path().join("b.ppm");
    let rgb: Vec<u8> = (0..5 * 4 * 3).map(|i| (i * 37 % 256) as u8).collect();
    ppm(&a, 5, 4, &rgb);
    let f = ingest_image(&a).unwrap();
    assert!(f.values().iter().all(|q| q.q0 == 0.0));
    export_image(&f, &b).unwrap();
    assert_eq!(ingest_image(&b).unwrap(), f);
}

#[test]
fn non_rgb_and_malformed_images_are_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let gray = dir.path().join("g.pgm");
    fs::write(&gray, b"P5\n2 1\n255\n\x00\x10").unwrap();
    assert!(ingest_image(&gray).is_err());
    let bad = dir.path().join("bad.ppm");
    fs::write(&bad, b"P6\n2 2\n255\n\x00").unwrap();
    assert!(ingest_image(&bad).is_err());
    let text = dir.path().join("t.ppm");
    fs::write(&text, "not an image").unwrap();
    assert!(ingest_image(&text).is_err());
    assert!(ingest_image(dir.path().join("missing.ppm")).is_err());
}

#[test]
fn qgrid_files_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let geom = GridGeometry::new(4, 6, 0.3, 0.1, -0.6, 1.0 / 7.0).unwrap();
    let f = random_quaternion_grid(geom, 11);
    for kind in [GridKind::Time, GridKind::Frequency] {
        let p = dir.path().join("f.qgrid");
        save_qgrid(&p, &f, kind).unwrap();
        assert_eq!(load_qgrid(&p).unwrap(), (kind, f.clone()));
    }
    let text = fs::read_to_string(dir.path().join("f.qgrid")).unwrap();
    assert!(text.starts_with("QGRID-FREQ 4 6 "));
    assert_eq!(text.lines().count(), 1 + 24);
}

#[test]
fn zero_grid_heatmap_is_uniform() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("z.pgm");
    let z = SampledSignal::zeros(GridGeometry::centered(5, 1.0).unwrap());
    let meta = export_heatmap(&z, &p, HeatmapMode::Modulus, HeatmapFormat::Pgm).unwrap().unwrap();
    assert_eq!((meta.min, meta.max), (0.0, 0.0));
    assert_eq!(read_heatmap_meta(&p).unwrap(), meta);
    assert!(sidecar_path(&p).exists());
    let levels = pgm_levels(&p);
    assert_eq!(levels.len(), 25);
    assert!(levels.iter().all(|&l| l == levels[0]));
}

#[test]
fn delta_spectrum_heatmap_is_uniform_nonzero() {
    let dir = tempfile::tempdir().unwrap();
    let geom = GridGeometry::centered(16, 4.0).unwrap();
    let params = GeneratorParams::default();
    let delta = generate(GeneratorKind::Delta, &params, geom).unwrap();
    let spec = qft_forward(&delta, AxisPair::default(), &natural_frequency_grid(&geom));
    let p = dir.path().join("d.pgm");
    let meta = export_heatmap(&spec, &p, HeatmapMode::Modulus, HeatmapFormat::Pgm).unwrap().unwrap();
    assert!((meta.max - meta.min).abs() < 1e-12 && meta.min > 0.0);
    let levels = pgm_levels(&p);
    assert!(levels.iter().all(|&l| l == 255), "{levels:?}");
}

#[test]
fn heatmap_levels_decode_through_sidecar() {
    let dir = tempfile::tempdir().unwrap();
    let geom = GridGeometry::centered(8, 2.0).unwrap();
    let f = random_quaternion_grid(geom, 4);
    let p = dir.path().join("r.pgm");
    let meta = export_heatmap(&f, &p, HeatmapMode::Component(2), HeatmapFormat::Pgm).unwrap().unwrap();
    let step = (meta.max - meta.min) / 255.0;
    for (level, q) in pgm_levels(&p).into_iter().zip(f.values()) {
        assert!((meta.value_of(level) - q.q2).abs() <= step / 2.0 + 1e-12);
    }
}

#[test]
fn wvd_slice_csv_matches_oracle() {
    let dir = tempfile::tempdir().unwrap();
    let geom = GridGeometry::centered(8, 3.0).unwrap();
    let f = gaussian(geom, 0.8, (0.0, 0.0), Quaternion::ONE);
    let fp = OffsetParams::fourier();
    let fg = wvd_frequency_grid(&geom, &fp, &fp);
    let w = wvd_qolct(&f, &f, &fp, &fp, AxisPair::default(), &fg).unwrap();
    let o = oracle_wvd(&f, &f, &fp, &fp, AxisPair::default(), &fg, false).unwrap();
    let p = dir.path().join("slice.csv");
    assert!(export_heatmap(w.slice(4, 4).as_signal(), &p, HeatmapMode::Modulus, HeatmapFormat::Csv).unwrap().is_none());
    let text = fs::read_to_string(&p).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("k1,k2,x1,x2,value"));
    let mut peak = (0.0, 0, 0);
    for line in lines {
        let cols: Vec<&str> = line.split(',').collect();
        let (k1, k2): (usize, usize) = (cols[0].parse().unwrap(), cols[1].parse().unwrap());
        let v: f64 = cols[4].parse().unwrap();
        assert!((v - o.get((4, 4), (k1, k2)).modulus()).abs() < 1e-12);
        if v > peak.0 {
            peak = (v, k1, k2);
        }
    }
    // centred blob: peak at zero frequency
    let (u1, u2) = fg.coord(peak.1, peak.2);
    assert!(u1.abs() < 1e-12 && u2.abs() < 1e-12, "{peak:?}");
}

#[test]
fn wvd_slices_export_with_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let geom = GridGeometry::centered(3, 1.0).unwrap();
    let f = random_quaternion_grid(geom, 1);
    let fp = OffsetParams::fourier();
    let fg = wvd_frequency_grid(&geom, &fp, &fp);
    let w = wvd_qolct(&f, &f, &fp, &fp, AxisPair::default(), &fg).unwrap();
    let manifest = export_wvd_slices(&w, dir.path().join("out")).unwrap();
    let text = fs::read_to_string(&manifest).unwrap();
    assert_eq!(text.lines().filter(|l| !l.starts_with('#')).count(), 9);
    let (kind, s) = load_qgrid(dir.path().join("out/slice_0001_0002.qgrid")).unwrap();
    assert_eq!(kind, GridKind::Frequency);
    assert_eq!(s, w.slice(1, 2).into_signal());
}
