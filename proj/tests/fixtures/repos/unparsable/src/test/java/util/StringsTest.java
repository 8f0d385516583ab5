package util;

import org.junit.Test;
import static org.junit.Assert.assertEquals;

public class StringsTest {
    @Test
    public void testReverse() {
        assertEquals("cba", Strings.reverse("abc"));
    }
}
