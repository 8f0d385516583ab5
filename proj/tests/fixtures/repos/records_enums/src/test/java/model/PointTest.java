package model;

import org.junit.Test;
import static org.junit.Assert.assertEquals;

public class PointTest {
    @Test
    public void testManhattan() {
        assertEquals(7, new Point(3, 4).manhattan());
    }
}
